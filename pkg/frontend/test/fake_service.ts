/** In-memory implementation of the workbench wire contract, for unit tests.
 *
 * Implements just enough of the endpoints the controllers touch, at the
 * fetch level, so tests exercise the real ApiClient serialization too.
 */

export interface FakeCandidate {
  id: string;
  tokens: string[];
  label: string | null;
}

export interface FakeState {
  candidates: FakeCandidate[];
  batch: { item_id: string; text: string }[];
  annotations: Map<string, Map<string, string>>; // annotator -> item -> label
  failNextLabel?: boolean;
}

function json(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function tallyOf(state: FakeState): Record<string, number> {
  const tally: Record<string, number> = { relevance: 0, irrelevance: 0, neither: 0, unlabeled: 0 };
  for (const candidate of state.candidates) {
    if (candidate.label) tally[candidate.label] += 1;
    else tally.unlabeled += 1;
  }
  return tally;
}

export function fakeFetch(state: FakeState): (url: string, init?: RequestInit) => Promise<Response> {
  return async (url, init) => {
    const parsed = new URL(url, "http://fake");
    const path = parsed.pathname;
    const body = init?.body ? JSON.parse(init.body as string) : {};

    if (path === "/api/candidates") {
      const page = Number(parsed.searchParams.get("page") ?? "1");
      const pageSize = Number(parsed.searchParams.get("page_size") ?? "50");
      const start = (page - 1) * pageSize;
      const items = state.candidates.slice(start, start + pageSize).map((candidate) => ({
        id: candidate.id,
        tokens: candidate.tokens,
        text: candidate.tokens.join(" "),
        n: candidate.tokens.length,
        score: 1.0,
        match_count: 1,
        label: candidate.label,
        labels: candidate.label ? { default: candidate.label } : {},
        samples: [],
      }));
      return json(200, {
        session: parsed.searchParams.get("session"),
        page,
        page_size: pageSize,
        total: state.candidates.length,
        items,
        tally: tallyOf(state),
      });
    }

    const labelMatch = path.match(/^\/api\/candidates\/([^/]+)\/label$/);
    if (labelMatch) {
      if (state.failNextLabel) {
        state.failNextLabel = false;
        return json(500, { error: "injected failure" });
      }
      const candidate = state.candidates.find((c) => c.id === labelMatch[1]);
      if (!candidate) return json(404, { error: "unknown candidate" });
      if (!["relevance", "irrelevance", "neither"].includes(body.label)) {
        return json(400, { error: "bad label" });
      }
      candidate.label = body.label;
      return json(200, { id: candidate.id, label: body.label, tally: tallyOf(state) });
    }

    if (path === "/api/annotate/next") {
      const annotator = parsed.searchParams.get("annotator") ?? "default";
      const done = state.annotations.get(annotator) ?? new Map();
      const index = state.batch.findIndex((item) => !done.has(item.item_id));
      if (index < 0) return json(200, { done: true, total: state.batch.length });
      const item = state.batch[index];
      return json(200, {
        done: false,
        item: { item_id: item.item_id, text: item.text },
        index,
        total: state.batch.length,
      });
    }

    if (path === "/api/annotate") {
      const annotator = body.annotator ?? "default";
      if (!["relevant", "irrelevant"].includes(body.label)) return json(400, { error: "bad label" });
      if (!state.batch.some((item) => item.item_id === body.item)) {
        return json(404, { error: "unknown item" });
      }
      let done = state.annotations.get(annotator);
      if (!done) {
        done = new Map();
        state.annotations.set(annotator, done);
      }
      if (done.has(body.item)) return json(409, { error: `already labeled ${body.item}` });
      done.set(body.item, body.label);
      return json(200, { item: body.item, label: body.label, remaining: state.batch.length - done.size });
    }

    return json(404, { error: `unhandled ${path}` });
  };
}
