/** Typed client for the workbench HTTP API. */

export interface CandidateSample {
  unit_id: string;
  raw: string;
  tokens: string[];
  span: [number, number];
}

export interface Candidate {
  id: string;
  tokens: string[];
  text: string;
  n: number;
  score: number;
  match_count: number;
  label: string | null;
  labels: Record<string, string>;
  samples: CandidateSample[];
}

export type Tally = Record<string, number>;

export interface CandidatePage {
  session: string;
  page: number;
  page_size: number;
  total: number;
  items: Candidate[];
  tally: Tally;
}

export interface LabelAck {
  id: string;
  label: string;
  tally: Tally;
}

export interface NextItem {
  done: boolean;
  item?: { item_id: string; text: string };
  index?: number;
  total: number;
}

export interface AnnotateAck {
  item: string;
  label: string;
  remaining: number;
}

export interface AgreementSummary {
  annotators: string[];
  complete: string[];
  fleiss_kappa: number | null;
  pairwise_cohen: Record<string, number | null>;
  reason?: string;
}

export interface SessionInfo {
  session: string;
  kind: "triage" | "annotation";
  total: number;
  tally?: Tally;
  progress?: Record<string, number>;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.text();
    if (!response.ok) {
      let message = `HTTP ${response.status}`;
      try {
        message = (JSON.parse(body) as { error?: string }).error ?? message;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, message);
    }
    return JSON.parse(body) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  candidates(session: string, page: number, pageSize: number): Promise<CandidatePage> {
    return this.request(
      `/api/candidates?session=${encodeURIComponent(session)}&page=${page}&page_size=${pageSize}`,
    );
  }

  labelCandidate(session: string, id: string, label: string, annotator?: string): Promise<LabelAck> {
    return this.post(
      `/api/candidates/${encodeURIComponent(id)}/label?session=${encodeURIComponent(session)}`,
      annotator === undefined ? { label } : { label, annotator },
    );
  }

  nextItem(session: string, annotator: string): Promise<NextItem> {
    return this.request(
      `/api/annotate/next?session=${encodeURIComponent(session)}&annotator=${encodeURIComponent(annotator)}`,
    );
  }

  annotate(session: string, item: string, label: string, annotator: string): Promise<AnnotateAck> {
    return this.post(`/api/annotate?session=${encodeURIComponent(session)}`, {
      item,
      label,
      annotator,
    });
  }

  agreement(session: string): Promise<AgreementSummary> {
    return this.request(`/api/agreement?session=${encodeURIComponent(session)}`);
  }

  sessions(): Promise<{ sessions: SessionInfo[] }> {
    return this.request("/api/sessions");
  }

  guidelines(): Promise<{ guidelines: string }> {
    return this.request("/api/guidelines");
  }

  async exportSeeds(session: string): Promise<{ content: string; redundant: string[] }> {
    const response = await this.fetchFn(
      this.baseUrl + `/api/export/seeds?session=${encodeURIComponent(session)}`,
    );
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    const header = response.headers.get("X-Redundant-Patterns");
    return {
      content: await response.text(),
      redundant: header ? header.split("; ") : [],
    };
  }

  async exportAnnotations(session: string): Promise<string> {
    const response = await this.fetchFn(
      this.baseUrl + `/api/export/annotations?session=${encodeURIComponent(session)}`,
    );
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return response.text();
  }
}
