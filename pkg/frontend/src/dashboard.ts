/** Read-only progress and agreement view model. */

import { AgreementSummary, ApiClient, SessionInfo } from "./api.js";

export interface DashboardSession {
  session: string;
  kind: "triage" | "annotation";
  total: number;
  tally?: Record<string, number>;
  progress?: Record<string, number>;
  agreement?: AgreementSummary;
}

export interface DashboardState {
  sessions: DashboardSession[];
}

export function kappaDisplay(value: number | null | undefined, reason?: string): string {
  if (value === null || value === undefined) {
    return reason ? `withheld (${reason})` : "withheld";
  }
  return value.toFixed(2);
}

export class DashboardController {
  constructor(private api: ApiClient) {}

  async load(): Promise<DashboardState> {
    const { sessions } = await this.api.sessions();
    const enriched: DashboardSession[] = [];
    for (const info of sessions as SessionInfo[]) {
      const entry: DashboardSession = { ...info };
      if (info.kind === "annotation") {
        entry.agreement = await this.api.agreement(info.session);
      }
      enriched.push(entry);
    }
    return { sessions: enriched };
  }
}
