import { ApiClient, SearchMode } from "./api";
import { IngestView, SearchView } from "./views";

declare global {
    interface Window {
        KSE_API_BASE?: string;
    }
}

function currentMode(): SearchMode {
    const checked = document.querySelector<HTMLInputElement>('input[name="mode"]:checked');
    return checked?.value === "normal" ? "normal" : "weighted";
}

document.addEventListener("DOMContentLoaded", () => {
    const api = new ApiClient(window.KSE_API_BASE ?? "");
    const searchView = new SearchView(
        document.getElementById("search-output") as HTMLElement,
        api,
    );
    const searchForm = document.getElementById("search-form") as HTMLFormElement;
    const searchInput = document.getElementById("search-input") as HTMLInputElement;

    searchForm.addEventListener("submit", (event) => {
        event.preventDefault();
        const query = searchInput.value.trim();
        if (!query) return;
        void searchView.runSearch(query, currentMode());
    });

    const ingestView = new IngestView(
        document.getElementById("ingest-output") as HTMLElement,
        api,
        (query) => {
            searchInput.value = query;
            void searchView.runSearch(query, currentMode());
            searchInput.focus();
        },
    );
    const ingestForm = document.getElementById("ingest-form") as HTMLFormElement;
    const urlInput = document.getElementById("url-input") as HTMLInputElement;

    ingestForm.addEventListener("submit", (event) => {
        event.preventDefault();
        void ingestView.previewUrl(urlInput.value.trim());
    });
});
