"""Scoring and ordering of search results.

The weighted mode combines four signals per document: field-weighted keyword
relevance (title counts more than body), ontology semantic relevance,
normalized popularity, and a recency half-life decay:

    keyword   = w_title * cos(query, title tf-idf) + w_body * cos(query, body tf-idf)
    relevance = alpha * keyword + (1 - alpha) * semantic
    total     = ((1 - beta) * relevance + beta * popularity) * recency

The alternative "normal" mode scores a document by the percentage of the
query's keyword result lists it appears in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyQueryError
from .index import Document, IndexSnapshot, Popularity, lookup
from .keywords import BODY, TITLE, compute_idf, compute_tf
from .ontology import (
    ExpandedQuery,
    ExpansionConfig,
    Ontology,
    cosine,
    expand_query,
    semantic_similarity,
)
from .textproc import Lexicon, StopList, tokenize_query

WEIGHTED = "weighted"
NORMAL = "normal"
MODES = (WEIGHTED, NORMAL)

SNIPPET_OPEN = "«"
SNIPPET_CLOSE = "»"


@dataclass(frozen=True)
class RankingConfig:
    w_title: float = 0.7
    w_body: float = 0.3
    alpha_keyword: float = 0.6
    beta_popularity: float = 0.1
    recency_half_life_days: float = 180.0
    top_n: int = 5

    def __post_init__(self):
        if abs(self.w_title + self.w_body - 1.0) > 1e-9:
            raise ValueError("w_title + w_body must equal 1")
        if self.w_title <= self.w_body:
            raise ValueError("w_title must be greater than w_body")
        if not 0.0 <= self.alpha_keyword <= 1.0:
            raise ValueError("alpha_keyword must be in [0, 1]")
        if not 0.0 <= self.beta_popularity < 1.0:
            raise ValueError("beta_popularity must be in [0, 1)")
        if self.recency_half_life_days <= 0:
            raise ValueError("recency_half_life_days must be positive")
        if self.top_n < 1:
            raise ValueError("top_n must be >= 1")


@dataclass(frozen=True)
class ScoreBreakdown:
    doc_id: str
    score_title: float
    score_body: float
    keyword_score: float
    semantic_score: float
    relevance: float
    popularity: float
    recency_factor: float
    total: float

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "score_title": self.score_title,
            "score_body": self.score_body,
            "keyword_score": self.keyword_score,
            "semantic_score": self.semantic_score,
            "relevance": self.relevance,
            "popularity": self.popularity,
            "recency_factor": self.recency_factor,
            "total": self.total,
        }


@dataclass(frozen=True)
class RankedResult:
    doc_id: str
    total: float
    snippet: str
    breakdown: ScoreBreakdown | None = None


def field_score(eq: ExpandedQuery, doc: Document, field: str, stats) -> float:
    """Cosine between the expanded-query vector and one field's tf-idf vector."""
    tokens = doc.title_tokens if field == TITLE else doc.body_tokens
    if tokens is None:
        raise ValueError(f"document {doc.doc_id} is not tokenized")
    d_vec = {
        term: tf * compute_idf(stats, term, field)
        for term, tf in compute_tf(tokens).items()
    }
    return cosine(eq.weights(), d_vec)


def weighted_keyword_score(s_title: float, s_body: float, cfg: RankingConfig) -> float:
    return cfg.w_title * s_title + cfg.w_body * s_body


def combine_relevance(keyword_score: float, semantic_score: float, cfg: RankingConfig) -> float:
    return cfg.alpha_keyword * keyword_score + (1.0 - cfg.alpha_keyword) * semantic_score


def normal_rank_score(occurrences: int, total_result_entries: int) -> float:
    """Occurrence percentage: how many of the per-keyword result lists
    contain the document, out of the number of keyword lists."""
    if total_result_entries < 1:
        raise ValueError("total_result_entries must be >= 1")
    if occurrences > total_result_entries:
        raise ValueError("occurrences cannot exceed total_result_entries")
    return occurrences * 100.0 / total_result_entries


def popularity_score(popularity: Popularity, views_range: tuple[int, int]) -> float:
    """Mean of three signals scaled to [0, 1]: click-through rate, average
    rating rescaled from [1, 5], and min-max normalized view count.

    A degenerate view range (every document equal) maps nonzero view counts
    to 0.5 by convention and zero views to 0.0.
    """
    ctr = popularity.clicks / popularity.impressions if popularity.impressions else 0.0
    if popularity.rating_count:
        avg = popularity.rating_sum / popularity.rating_count
        rating = min(max((avg - 1.0) / 4.0, 0.0), 1.0)
    else:
        rating = 0.0
    lo, hi = views_range
    if hi > lo:
        views = min(max((popularity.views - lo) / (hi - lo), 0.0), 1.0)
    else:
        views = 0.5 if popularity.views > 0 else 0.0
    return (ctr + rating + views) / 3.0


def views_range_of(snapshot: IndexSnapshot) -> tuple[int, int]:
    counts = [d.popularity.views for d in snapshot.documents.values()]
    if not counts:
        return (0, 0)
    return (min(counts), max(counts))


def recency_factor(ingested_at: float, now: float, cfg: RankingConfig) -> float:
    """Half-life decay 2^(-age_days / half_life); 1.0 for a brand-new document."""
    if now < ingested_at:
        raise ValueError("now must not precede the ingestion time")
    age_days = (now - ingested_at) / 86400.0
    return math.pow(2.0, -age_days / cfg.recency_half_life_days)


def combine_total(relevance: float, popularity: float, recency: float, cfg: RankingConfig) -> float:
    return ((1.0 - cfg.beta_popularity) * relevance + cfg.beta_popularity * popularity) * recency


def score_document(
    eq: ExpandedQuery,
    doc: Document,
    snapshot: IndexSnapshot,
    cfg: RankingConfig,
    now: float,
    views_range: tuple[int, int],
) -> ScoreBreakdown:
    s_title = field_score(eq, doc, TITLE, snapshot.stats)
    s_body = field_score(eq, doc, BODY, snapshot.stats)
    keyword = weighted_keyword_score(s_title, s_body, cfg)
    semantic = semantic_similarity(eq, doc)
    relevance = combine_relevance(keyword, semantic, cfg)
    pop = popularity_score(doc.popularity, views_range)
    rec = recency_factor(doc.ingested_at, now, cfg)
    total = combine_total(relevance, pop, rec, cfg)
    return ScoreBreakdown(
        doc_id=doc.doc_id,
        score_title=s_title,
        score_body=s_body,
        keyword_score=keyword,
        semantic_score=semantic,
        relevance=relevance,
        popularity=pop,
        recency_factor=rec,
        total=total,
    )


def rank(
    query: str,
    snapshot: IndexSnapshot,
    ont: Ontology,
    cfg: RankingConfig,
    now: float,
    lexicon: Lexicon,
    stops: StopList,
    mode: str = WEIGHTED,
    expansion: ExpansionConfig = ExpansionConfig(),
    expand: bool = True,
) -> tuple[ExpandedQuery, list[RankedResult]]:
    """Retrieve, score and order the top documents for a query.

    Candidates are the documents containing at least one expanded-query term
    in either field. Results are sorted by total descending with doc_id as
    the tie-break, truncated to cfg.top_n. Raises EmptyQueryError when
    nothing survives stop-word removal.
    """
    if mode not in MODES:
        raise ValueError(f"unknown ranking mode {mode!r}")
    stream = tokenize_query(query, lexicon, stops)
    if not stream:
        raise EmptyQueryError(f"query {query!r} is empty after stop-word removal")
    if expand:
        eq = expand_query(stream, ont, expansion)
    else:
        eq = ExpandedQuery.from_terms(stream.terms())

    if mode == NORMAL:
        return eq, _rank_normal(stream.terms(), eq, snapshot, cfg)

    candidates: set[str] = set()
    for term in eq.term_set():
        for posting in lookup(term, snapshot):
            candidates.add(posting.doc_id)

    views_range = views_range_of(snapshot)
    breakdowns = [
        score_document(eq, snapshot.documents[doc_id], snapshot, cfg, now, views_range)
        for doc_id in candidates
    ]
    breakdowns.sort(key=lambda b: (-b.total, b.doc_id))
    results = [
        RankedResult(
            doc_id=b.doc_id,
            total=b.total,
            snippet=generate_snippet(snapshot.documents[b.doc_id], eq),
            breakdown=b,
        )
        for b in breakdowns[: cfg.top_n]
    ]
    return eq, results


def _rank_normal(
    terms: list[str], eq: ExpandedQuery, snapshot: IndexSnapshot, cfg: RankingConfig
) -> list[RankedResult]:
    keyword_lists = {term: lookup(term, snapshot) for term in dict.fromkeys(terms)}
    membership: dict[str, int] = {}
    for plist in keyword_lists.values():
        for posting in plist:
            membership[posting.doc_id] = membership.get(posting.doc_id, 0) + 1
    total_lists = len(keyword_lists)
    scored = sorted(
        ((normal_rank_score(count, total_lists), doc_id) for doc_id, count in membership.items()),
        key=lambda pair: (-pair[0], pair[1]),
    )
    return [
        RankedResult(
            doc_id=doc_id,
            total=score,
            snippet=generate_snippet(snapshot.documents[doc_id], eq),
            breakdown=None,
        )
        for score, doc_id in scored[: cfg.top_n]
    ]


def generate_snippet(doc: Document, eq: ExpandedQuery, max_len: int = 160) -> str:
    """Body excerpt of at most max_len characters around the densest cluster
    of query-term matches, each match wrapped in guillemets. Falls back to
    the body prefix when nothing matches."""
    terms = eq.term_set()
    matches = [
        (t.offset, t.offset + len(t.surface))
        for t in (doc.body_tokens or ())
        if t.normalized in terms
    ]
    body = doc.body
    if not matches:
        return body[:max_len]

    best_i, best_j = 0, 0
    best_count = 0
    j = 0
    for i in range(len(matches)):
        if j < i:
            j = i
        while j + 1 < len(matches) and matches[j + 1][1] - matches[i][0] <= max_len:
            j += 1
        count = j - i + 1
        if count > best_count:
            best_count, best_i, best_j = count, i, j

    core_start, core_end = matches[best_i][0], matches[best_j][1]
    slack = max_len - (core_end - core_start)
    start = max(0, core_start - slack // 2)
    end = min(len(body), start + max_len)
    start = max(0, end - max_len)

    parts = []
    cursor = start
    for m_start, m_end in matches[best_i : best_j + 1]:
        if m_start < start or m_end > end:
            continue
        parts.append(body[cursor:m_start])
        parts.append(SNIPPET_OPEN + body[m_start:m_end] + SNIPPET_CLOSE)
        cursor = m_end
    parts.append(body[cursor:end])
    return "".join(parts)
