// Search console views. All numbers shown on screen come verbatim from the
// API; the client never rescores or reorders anything.

import { ApiClient, ApiError, Breakdown, SearchMode, SearchResponse, UrlPreview } from "./api";
import { renderSnippet } from "./highlight";

const BREAKDOWN_FIELDS: Array<[keyof Breakdown, string]> = [
    ["score_title", "title score"],
    ["score_body", "body score"],
    ["keyword_score", "keyword"],
    ["semantic_score", "semantic"],
    ["relevance", "relevance"],
    ["popularity", "popularity"],
    ["recency_factor", "recency"],
    ["total", "total"],
];

function el<K extends keyof HTMLElementTagNameMap>(
    doc: Document,
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = doc.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export class SearchView {
    private lastResponse: SearchResponse | null = null;

    constructor(
        private readonly root: HTMLElement,
        private readonly api: ApiClient,
        private readonly doc: Document = root.ownerDocument,
    ) {
        this.root.innerHTML = "";
        this.root.append(
            el(this.doc, "div", "kse-status"),
            el(this.doc, "div", "kse-chips"),
            el(this.doc, "div", "kse-results"),
        );
    }

    private part(selector: string): HTMLElement {
        return this.root.querySelector(selector) as HTMLElement;
    }

    /** One API call per invocation. On failure the previous results stay. */
    async runSearch(query: string, mode: SearchMode): Promise<void> {
        const status = this.part(".kse-status");
        status.textContent = "Searching…";
        try {
            const response = await this.api.search(query, mode);
            this.lastResponse = response;
            status.textContent = "";
            this.renderChips(response);
            this.renderResults(response);
        } catch (error) {
            if (error instanceof DOMException && error.name === "AbortError") {
                return; // superseded by a newer submit
            }
            const detail = error instanceof ApiError ? error.message : String(error);
            status.textContent = `Search failed: ${detail}`;
        }
    }

    private renderChips(response: SearchResponse): void {
        const chips = this.part(".kse-chips");
        chips.innerHTML = "";
        for (const term of response.expanded_terms) {
            const chip = el(this.doc, "span", "kse-chip", term.term);
            chip.title = `${term.relation} of ${term.entity_id}, weight ${term.weight}`;
            chips.appendChild(chip);
        }
    }

    private renderResults(response: SearchResponse): void {
        const container = this.part(".kse-results");
        container.innerHTML = "";
        if (response.results.length === 0) {
            container.appendChild(el(this.doc, "p", "kse-empty", "No matches."));
            return;
        }
        for (const result of response.results) {
            const card = el(this.doc, "article", "kse-result");
            card.dataset.docId = result.doc_id;

            const title = el(this.doc, "a", "kse-title", result.title);
            title.href = result.url || "#";
            if (result.url) title.target = "_blank";
            title.addEventListener("click", () => {
                // Click-through feedback is fired once, before navigation.
                void this.api.clickFeedback(result.doc_id, response.query);
            });
            card.appendChild(title);

            if (result.url) {
                card.appendChild(el(this.doc, "div", "kse-url", result.url));
            }
            const snippet = el(this.doc, "p", "kse-snippet");
            snippet.appendChild(renderSnippet(this.doc, result.snippet));
            card.appendChild(snippet);
            card.appendChild(el(this.doc, "div", "kse-score", `score ${result.total}`));

            if (result.breakdown) {
                card.appendChild(this.breakdownPanel(result.breakdown));
            }
            container.appendChild(card);
        }
    }

    private breakdownPanel(breakdown: Breakdown): HTMLElement {
        const details = el(this.doc, "details", "kse-breakdown");
        details.appendChild(el(this.doc, "summary", undefined, "score breakdown"));
        const table = el(this.doc, "table");
        for (const [field, label] of BREAKDOWN_FIELDS) {
            const row = el(this.doc, "tr");
            row.appendChild(el(this.doc, "td", undefined, label));
            row.appendChild(el(this.doc, "td", "kse-num", String(breakdown[field])));
            table.appendChild(row);
        }
        details.appendChild(table);
        return details;
    }

    get results(): SearchResponse | null {
        return this.lastResponse;
    }
}

export type IngestPhase = "idle" | "previewed" | "confirmed";

export class IngestView {
    phase: IngestPhase = "idle";
    private preview: UrlPreview | null = null;
    private sourceUrl = "";

    constructor(
        private readonly root: HTMLElement,
        private readonly api: ApiClient,
        private readonly onSearchLink: (query: string) => void = () => {},
        private readonly doc: Document = root.ownerDocument,
    ) {
        this.root.innerHTML = "";
        const status = el(this.doc, "div", "kse-ingest-status");
        const titlePane = el(this.doc, "div", "kse-preview-title");
        const bodyPane = el(this.doc, "div", "kse-preview-body");
        const confirm = el(this.doc, "button", "kse-confirm", "Add to index");
        confirm.disabled = true;
        confirm.addEventListener("click", () => void this.confirm());
        const cancel = el(this.doc, "button", "kse-cancel", "Cancel");
        cancel.addEventListener("click", () => this.reset());
        this.root.append(status, titlePane, bodyPane, confirm, cancel);
    }

    private part(selector: string): HTMLElement {
        return this.root.querySelector(selector) as HTMLElement;
    }

    private get confirmButton(): HTMLButtonElement {
        return this.part(".kse-confirm") as HTMLButtonElement;
    }

    /** Client-side URL validation happens before any request is made. */
    async previewUrl(rawUrl: string): Promise<void> {
        const status = this.part(".kse-ingest-status");
        let parsed: URL;
        try {
            parsed = new URL(rawUrl);
            if (!/^https?:$/.test(parsed.protocol)) throw new Error("not http(s)");
        } catch {
            status.textContent = "Enter a valid http(s) URL.";
            return;
        }
        status.textContent = "Fetching preview…";
        try {
            const preview = await this.api.previewUrl(parsed.toString());
            this.preview = preview;
            this.sourceUrl = parsed.toString();
            this.phase = "previewed";
            status.textContent = "Preview ready. Confirm to index.";
            this.part(".kse-preview-title").textContent = preview.title;
            this.part(".kse-preview-body").textContent = preview.body;
            this.confirmButton.disabled = false;
        } catch (error) {
            const detail = error instanceof ApiError ? error.message : String(error);
            status.textContent = `Preview failed: ${detail}`;
        }
    }

    async confirm(): Promise<void> {
        if (this.phase !== "previewed" || !this.preview) return;
        const status = this.part(".kse-ingest-status");
        try {
            const created = await this.api.addDocument(
                this.preview.title,
                this.preview.body,
                this.sourceUrl,
            );
            this.phase = "confirmed";
            this.confirmButton.disabled = true;
            status.textContent = created.created
                ? `Indexed as ${created.doc_id}. `
                : `Already indexed as ${created.doc_id}. `;
            const link = el(this.doc, "a", "kse-search-link", "Search for it");
            link.href = "#";
            const query = this.preview.title;
            link.addEventListener("click", (event) => {
                event.preventDefault();
                this.onSearchLink(query);
            });
            status.appendChild(link);
        } catch (error) {
            const detail = error instanceof ApiError ? error.message : String(error);
            status.textContent = `Indexing failed: ${detail}`;
        }
    }

    reset(): void {
        this.phase = "idle";
        this.preview = null;
        this.sourceUrl = "";
        this.part(".kse-ingest-status").textContent = "";
        this.part(".kse-preview-title").textContent = "";
        this.part(".kse-preview-body").textContent = "";
        this.confirmButton.disabled = true;
    }
}
