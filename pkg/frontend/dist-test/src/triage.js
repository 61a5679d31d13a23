/** Triage state machine: one candidate at a time, keyboard-first.
 *
 * Labels block until the service acknowledges; the displayed tally is
 * always the one returned by the last ack, never an optimistic guess.
 * Undo steps back to the previous candidate and relies on last-write-wins
 * relabeling on the service side.
 */
const KEY_TO_LABEL = {
    r: "relevance",
    i: "irrelevance",
    n: "neither",
};
export class TriageController {
    api;
    session;
    annotator;
    onError;
    candidates = [];
    cursor = 0;
    history = [];
    tally = {};
    busy = false;
    constructor(api, session, annotator, onError = () => { }) {
        this.api = api;
        this.session = session;
        this.annotator = annotator;
        this.onError = onError;
    }
    async load(pageSize = 200) {
        const all = [];
        let page = 1;
        for (;;) {
            const result = await this.api.candidates(this.session, page, pageSize);
            all.push(...result.items);
            this.tally = result.tally;
            if (all.length >= result.total || result.items.length === 0)
                break;
            page += 1;
        }
        this.candidates = all;
        this.cursor = all.findIndex((c) => c.label === null);
        if (this.cursor < 0)
            this.cursor = all.length;
    }
    state() {
        const done = this.cursor >= this.candidates.length;
        const labeled = Object.entries(this.tally)
            .filter(([key]) => key !== "unlabeled")
            .reduce((sum, [, count]) => sum + count, 0);
        return {
            current: done ? null : this.candidates[this.cursor],
            position: Math.min(this.cursor, this.candidates.length),
            total: this.candidates.length,
            labeled,
            tally: this.tally,
            busy: this.busy,
            done,
        };
    }
    /** Handle R/I/N/U; returns true when the key changed anything. */
    async handleKey(key) {
        if (this.busy)
            return false;
        if (key.toLowerCase() === "u")
            return this.undo();
        const label = KEY_TO_LABEL[key.toLowerCase()];
        if (!label || this.cursor >= this.candidates.length)
            return false;
        const candidate = this.candidates[this.cursor];
        this.busy = true;
        try {
            const ack = await this.api.labelCandidate(this.session, candidate.id, label, this.annotator);
            candidate.label = ack.label;
            this.tally = ack.tally;
            this.history.push(this.cursor);
            this.cursor += 1;
            return true;
        }
        catch (error) {
            this.onError(error instanceof Error ? error.message : String(error));
            return false;
        }
        finally {
            this.busy = false;
        }
    }
    undo() {
        const previous = this.history.pop();
        if (previous === undefined)
            return false;
        this.cursor = previous;
        return true;
    }
    async exportSeeds() {
        return this.api.exportSeeds(this.session);
    }
}
