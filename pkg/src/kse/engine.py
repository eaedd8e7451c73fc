"""Stateful engine shared by the HTTP service and the CLI.

Holds the immutable pieces (lexicon, stop list, ontology) and the current
index snapshot, and owns the append-only feedback log. Queries always run
against one snapshot reference; rebuilds assemble a new snapshot off to the
side and swap it in atomically. Feedback never touches the live snapshot:
events accumulate in the log and are folded into document popularity at the
next rebuild, tracked by a fold watermark so no event is counted twice.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path

from . import index as index_store
from .config import ServiceConfig
from .errors import KseError, StateError
from .index import Document, IndexSnapshot, Popularity
from .ontology import ExpandedQuery, load_ontology
from .ranking import WEIGHTED, RankedResult, rank
from .textproc import Lexicon, StopList

EVENT_TYPES = ("impression", "click", "rating", "view")


class UnknownDocumentError(KseError):
    """Feedback or lookup names a document that is not in the index."""


@dataclass(frozen=True)
class FeedbackEvent:
    doc_id: str
    query: str
    event: str
    at: float
    value: float | None = None

    def __post_init__(self):
        if self.event not in EVENT_TYPES:
            raise ValueError(f"unknown event type {self.event!r}")
        if self.event == "rating":
            if self.value is None or not 1.0 <= self.value <= 5.0:
                raise ValueError("rating events need a value in [1, 5]")
        elif self.value is not None:
            raise ValueError(f"{self.event} events must not carry a value")

    def to_dict(self) -> dict:
        record = {"doc_id": self.doc_id, "query": self.query, "event": self.event, "at": self.at}
        if self.value is not None:
            record["value"] = self.value
        return record


def _apply_events(pop: Popularity, events: list[FeedbackEvent]) -> Popularity:
    clicks, impressions = pop.clicks, pop.impressions
    rating_sum, rating_count = pop.rating_sum, pop.rating_count
    views = pop.views
    for ev in events:
        if ev.event == "impression":
            impressions += 1
        elif ev.event == "click":
            clicks += 1
        elif ev.event == "rating":
            rating_sum += ev.value
            rating_count += 1
        elif ev.event == "view":
            views += 1
    # A click recorded without its impression still implies one.
    impressions = max(impressions, clicks)
    return Popularity(
        clicks=clicks,
        impressions=impressions,
        rating_sum=rating_sum,
        rating_count=rating_count,
        views=views,
    )


class SearchEngine:
    def __init__(self, config: ServiceConfig, fetcher=None):
        config.validate_paths(require_index=True)
        self.config = config
        self.lexicon = Lexicon.load(config.lexicon)
        self.stops = StopList.load(config.stoplist)
        self.ontology = load_ontology(config.ontology)
        self._fetcher = fetcher or _default_fetcher
        self._lock = threading.Lock()
        self._staged: dict[str, Document] = {}
        self.snapshot: IndexSnapshot | None = (
            index_store.load(config.index) if index_store.has_snapshot(config.index) else None
        )

    # -- search ------------------------------------------------------------

    def search(
        self,
        query: str,
        mode: str = WEIGHTED,
        top: int | None = None,
        now: float | None = None,
        expand: bool = True,
    ) -> tuple[ExpandedQuery, list[RankedResult]]:
        if self.config.defer_reindex and self._staged:
            self.rebuild()
        snapshot = self._require_snapshot()
        cfg = self.config.ranking if top is None else replace(self.config.ranking, top_n=top)
        if now is None:
            # Recency relative to the newest document keeps responses
            # bit-identical for a fixed snapshot; ordering is unaffected
            # because the decay multiplies every document equally over time.
            now = max((d.ingested_at for d in snapshot.documents.values()), default=0.0)
        eq, results = rank(
            query,
            snapshot,
            self.ontology,
            cfg,
            now,
            self.lexicon,
            self.stops,
            mode=mode,
            expansion=self.config.expansion,
            expand=expand,
        )
        at = time.time()
        for result in results:
            self._append_event(FeedbackEvent(result.doc_id, query, "impression", at))
        return eq, results

    def get_document(self, doc_id: str) -> Document:
        snapshot = self._require_snapshot()
        try:
            return snapshot.documents[doc_id]
        except KeyError:
            raise UnknownDocumentError(f"unknown document {doc_id!r}") from None

    def _require_snapshot(self) -> IndexSnapshot:
        if self.snapshot is None:
            raise StateError("index not built")
        return self.snapshot

    # -- ingestion -----------------------------------------------------------

    def add_document(self, title: str, body: str, url: str | None = None) -> tuple[str, bool]:
        """Stage a document; returns (doc_id, created). Rebuilds immediately
        unless reindexing is deferred."""
        doc_id = index_store.content_doc_id(title, body)
        existing = self.snapshot.documents if self.snapshot else {}
        if doc_id in existing or doc_id in self._staged:
            return doc_id, False
        doc = index_store.tokenize_document(
            doc_id, title, body, self.lexicon, self.stops, url=url, ingested_at=time.time()
        )
        with self._lock:
            self._staged[doc_id] = doc
        if not self.config.defer_reindex:
            self.rebuild()
        return doc_id, True

    def add_url(self, url: str, do_index: bool = True) -> tuple[str | None, str, str, bool]:
        """Fetch a page, extract (title, body), optionally index it.

        Returns (doc_id or None, title, body, created).
        """
        html = self._fetcher(url, self.config.fetch_limit_bytes)
        title, body = index_store.ingest_url(url, html)
        if not do_index:
            return None, title, body, False
        doc_id, created = self.add_document(title, body, url=url)
        return doc_id, title, body, created

    # -- feedback ------------------------------------------------------------

    def record_feedback(self, doc_id: str, query: str, event: str, value: float | None = None) -> FeedbackEvent:
        snapshot = self._require_snapshot()
        if doc_id not in snapshot.documents and doc_id not in self._staged:
            raise UnknownDocumentError(f"unknown document {doc_id!r}")
        ev = FeedbackEvent(doc_id, query, event, time.time(), value)
        self._append_event(ev)
        return ev

    def _append_event(self, event: FeedbackEvent) -> None:
        line = json.dumps(event.to_dict(), ensure_ascii=False, sort_keys=True)
        with self._lock:
            with open(self.config.feedback_log, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def _read_unfolded_events(self) -> tuple[dict[str, list[FeedbackEvent]], int]:
        log_path = self.config.feedback_log
        folded = 0
        if self.config.feedback_state.exists():
            folded = json.loads(self.config.feedback_state.read_text(encoding="utf-8")).get("folded", 0)
        per_doc: dict[str, list[FeedbackEvent]] = {}
        total = folded
        if log_path.exists():
            lines = log_path.read_text(encoding="utf-8").splitlines()
            total = len(lines)
            for line in lines[folded:]:
                if not line.strip():
                    continue
                raw = json.loads(line)
                ev = FeedbackEvent(
                    raw["doc_id"], raw.get("query", ""), raw["event"], raw.get("at", 0.0), raw.get("value")
                )
                per_doc.setdefault(ev.doc_id, []).append(ev)
        return per_doc, total

    # -- rebuild ----------------------------------------------------------------

    def rebuild(self) -> IndexSnapshot:
        """Fold pending feedback into popularity, rebuild, persist, swap."""
        with self._lock:
            docs = dict(self.snapshot.documents) if self.snapshot else {}
            docs.update(self._staged)
            staged_ids = list(self._staged)
        per_doc, watermark = self._read_unfolded_events()
        for doc_id, events in per_doc.items():
            if doc_id in docs:
                doc = docs[doc_id]
                docs[doc_id] = index_store.with_popularity(doc, _apply_events(doc.popularity, events))
        snapshot = index_store.build_snapshot(docs.values())
        index_store.persist(snapshot, self.config.index)
        self.config.feedback_state.write_text(
            json.dumps({"folded": watermark}) + "\n", encoding="utf-8"
        )
        with self._lock:
            self.snapshot = snapshot
            for doc_id in staged_ids:
                self._staged.pop(doc_id, None)
        return snapshot


class FetchError(KseError):
    """Upstream page could not be fetched."""

    def __init__(self, message: str, upstream_status: int | None = None):
        super().__init__(message)
        self.upstream_status = upstream_status


class OversizedError(KseError):
    """Fetched or submitted content exceeds the configured size limit."""


def _default_fetcher(url: str, limit_bytes: int) -> str:
    import httpx

    try:
        response = httpx.get(url, follow_redirects=True, timeout=10.0)
    except httpx.HTTPError as exc:
        raise FetchError(f"fetch failed for {url}: {exc}") from exc
    if response.status_code >= 400:
        raise FetchError(
            f"GET {url} returned {response.status_code}", upstream_status=response.status_code
        )
    if len(response.content) > limit_bytes:
        raise OversizedError(f"page at {url} exceeds {limit_bytes} bytes")
    return response.text
