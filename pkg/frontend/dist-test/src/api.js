/** Typed client for the workbench HTTP API. */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        const response = await this.fetchFn(this.baseUrl + path, init);
        const body = await response.text();
        if (!response.ok) {
            let message = `HTTP ${response.status}`;
            try {
                message = JSON.parse(body).error ?? message;
            }
            catch {
                /* non-JSON error body */
            }
            throw new ApiError(response.status, message);
        }
        return JSON.parse(body);
    }
    post(path, payload) {
        return this.request(path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
    }
    candidates(session, page, pageSize) {
        return this.request(`/api/candidates?session=${encodeURIComponent(session)}&page=${page}&page_size=${pageSize}`);
    }
    labelCandidate(session, id, label, annotator) {
        return this.post(`/api/candidates/${encodeURIComponent(id)}/label?session=${encodeURIComponent(session)}`, annotator === undefined ? { label } : { label, annotator });
    }
    nextItem(session, annotator) {
        return this.request(`/api/annotate/next?session=${encodeURIComponent(session)}&annotator=${encodeURIComponent(annotator)}`);
    }
    annotate(session, item, label, annotator) {
        return this.post(`/api/annotate?session=${encodeURIComponent(session)}`, {
            item,
            label,
            annotator,
        });
    }
    agreement(session) {
        return this.request(`/api/agreement?session=${encodeURIComponent(session)}`);
    }
    sessions() {
        return this.request("/api/sessions");
    }
    guidelines() {
        return this.request("/api/guidelines");
    }
    async exportSeeds(session) {
        const response = await this.fetchFn(this.baseUrl + `/api/export/seeds?session=${encodeURIComponent(session)}`);
        if (!response.ok) {
            throw new ApiError(response.status, await response.text());
        }
        const header = response.headers.get("X-Redundant-Patterns");
        return {
            content: await response.text(),
            redundant: header ? header.split("; ") : [],
        };
    }
    async exportAnnotations(session) {
        const response = await this.fetchFn(this.baseUrl + `/api/export/annotations?session=${encodeURIComponent(session)}`);
        if (!response.ok) {
            throw new ApiError(response.status, await response.text());
        }
        return response.text();
    }
}
