// Typed client for the search service JSON API. The UI never computes
// scores; everything rendered comes straight from these response shapes.

export interface ExpansionTerm {
    term: string;
    weight: number;
    entity_id: string;
    relation: string;
}

export interface Breakdown {
    doc_id: string;
    score_title: number;
    score_body: number;
    keyword_score: number;
    semantic_score: number;
    relevance: number;
    popularity: number;
    recency_factor: number;
    total: number;
}

export interface SearchResult {
    doc_id: string;
    title: string;
    url?: string | null;
    snippet: string;
    total: number;
    breakdown?: Breakdown | null;
}

export interface SearchResponse {
    query: string;
    mode: string;
    expanded_terms: ExpansionTerm[];
    results: SearchResult[];
}

export interface UrlPreview {
    doc_id: string | null;
    created: boolean;
    indexed: boolean;
    title: string;
    body: string;
}

export interface DocumentCreated {
    doc_id: string;
    created: boolean;
}

export type SearchMode = "weighted" | "normal";

export class ApiError extends Error {
    constructor(message: string, readonly status: number) {
        super(message);
    }
}

async function errorDetail(response: Response): Promise<string> {
    try {
        const body = await response.json();
        return body.detail || body.error || response.statusText;
    } catch {
        return response.statusText;
    }
}

export class ApiClient {
    private searchController: AbortController | null = null;

    constructor(readonly baseUrl: string = "", private readonly fetchFn: typeof fetch = fetch) {}

    /** GET /search. A new call aborts any search still in flight. */
    async search(query: string, mode: SearchMode): Promise<SearchResponse> {
        this.searchController?.abort();
        const controller = new AbortController();
        this.searchController = controller;
        const params = new URLSearchParams({ q: query, mode, explain: "1" });
        const response = await this.fetchFn(`${this.baseUrl}/search?${params}`, {
            signal: controller.signal,
        });
        if (!response.ok) {
            throw new ApiError(await errorDetail(response), response.status);
        }
        return response.json();
    }

    /** POST /documents/from-url with index=0: extraction preview only. */
    async previewUrl(url: string): Promise<UrlPreview> {
        const response = await this.fetchFn(`${this.baseUrl}/documents/from-url?index=0`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ url }),
        });
        if (!response.ok) {
            throw new ApiError(await errorDetail(response), response.status);
        }
        return response.json();
    }

    /** POST /documents: index previously previewed content. */
    async addDocument(title: string, body: string, url?: string): Promise<DocumentCreated> {
        const response = await this.fetchFn(`${this.baseUrl}/documents`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ title, body, url }),
        });
        if (!response.ok) {
            throw new ApiError(await errorDetail(response), response.status);
        }
        return response.json();
    }

    /** POST /feedback, fired when a user clicks through to a result. */
    async clickFeedback(docId: string, query: string): Promise<void> {
        await this.fetchFn(`${this.baseUrl}/feedback`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ doc_id: docId, query, event: "click" }),
            keepalive: true,
        });
    }
}
