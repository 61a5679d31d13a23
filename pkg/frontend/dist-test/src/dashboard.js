/** Read-only progress and agreement view model. */
export function kappaDisplay(value, reason) {
    if (value === null || value === undefined) {
        return reason ? `withheld (${reason})` : "withheld";
    }
    return value.toFixed(2);
}
export class DashboardController {
    api;
    constructor(api) {
        this.api = api;
    }
    async load() {
        const { sessions } = await this.api.sessions();
        const enriched = [];
        for (const info of sessions) {
            const entry = { ...info };
            if (info.kind === "annotation") {
                entry.agreement = await this.api.agreement(info.session);
            }
            enriched.push(entry);
        }
        return { sessions: enriched };
    }
}
