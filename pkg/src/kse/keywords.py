"""TF-IDF keyword extraction over title and body fields.

Term frequency is length-normalized within a field; inverse document
frequency uses the smoothed form ln((1+N)/(1+df)) + 1, which is always >= 1
and never divides by zero. Document frequency is tracked per field so title
weights use title df and body weights use body df.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .errors import StateError
from .textproc import TokenStream

TITLE = "title"
BODY = "body"
POOLED = "pooled"


@dataclass(frozen=True)
class CorpusStats:
    """Document counts and per-field document frequencies for a corpus."""

    doc_count: int
    df_title: Mapping[str, int]
    df_body: Mapping[str, int]
    df_pooled: Mapping[str, int]

    def df(self, term: str, field: str = POOLED) -> int:
        """Documents containing `term` in the given field (0 if absent)."""
        table = {TITLE: self.df_title, BODY: self.df_body, POOLED: self.df_pooled}[field]
        return table.get(term, 0)

    @classmethod
    def empty(cls) -> "CorpusStats":
        return cls(doc_count=0, df_title={}, df_body={}, df_pooled={})


@dataclass(frozen=True)
class KeywordSet:
    """Top keywords per field, sorted by weight descending then term ascending."""

    doc_id: str
    title_keywords: tuple[tuple[str, float], ...]
    body_keywords: tuple[tuple[str, float], ...]

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "title_keywords": [{"term": t, "weight": w} for t, w in self.title_keywords],
            "body_keywords": [{"term": t, "weight": w} for t, w in self.body_keywords],
        }


def compute_tf(field_tokens: TokenStream) -> dict[str, float]:
    """Length-normalized term frequency over a field's normalized tokens."""
    counts = Counter(field_tokens.terms())
    total = sum(counts.values())
    if total == 0:
        return {}
    return {term: count / total for term, count in counts.items()}


def compute_idf(stats: CorpusStats, term: str, field: str = POOLED) -> float:
    """Smoothed idf: ln((1+N)/(1+df)) + 1. Unknown terms get df = 0."""
    if stats.doc_count < 1:
        raise ValueError("corpus has no documents")
    df = stats.df(term, field)
    return math.log((1 + stats.doc_count) / (1 + df)) + 1.0


def _top_k(weights: dict[str, float], k: int) -> tuple[tuple[str, float], ...]:
    ranked = sorted(weights.items(), key=lambda item: (-item[1], item[0]))
    return tuple(ranked[:k])


def extract_keywords(doc, stats: CorpusStats, k_title: int = 5, k_body: int = 10) -> KeywordSet:
    """Top-k tf-idf keywords per field of a tokenized document.

    Ties are broken by term, ascending, so identical inputs always give
    identical keyword sets.
    """
    if k_title < 1 or k_body < 1:
        raise ValueError("k_title and k_body must be >= 1")
    if doc.title_tokens is None or doc.body_tokens is None:
        raise StateError(f"document {doc.doc_id} is not tokenized")
    title_weights = {
        term: tf * compute_idf(stats, term, TITLE)
        for term, tf in compute_tf(doc.title_tokens).items()
    }
    body_weights = {
        term: tf * compute_idf(stats, term, BODY)
        for term, tf in compute_tf(doc.body_tokens).items()
    }
    return KeywordSet(
        doc_id=doc.doc_id,
        title_keywords=_top_k(title_weights, k_title),
        body_keywords=_top_k(body_weights, k_body),
    )
