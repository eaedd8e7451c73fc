"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"


class ErrorBody(BaseModel):
    error: str
    detail: str


class ExpansionTermModel(BaseModel):
    term: str
    weight: float
    entity_id: str
    relation: str


class BreakdownModel(BaseModel):
    doc_id: str
    score_title: float
    score_body: float
    keyword_score: float
    semantic_score: float
    relevance: float
    popularity: float
    recency_factor: float
    total: float


class SearchResult(BaseModel):
    doc_id: str
    title: str
    url: str | None = None
    snippet: str
    total: float
    breakdown: BreakdownModel | None = None


class SearchResponse(BaseModel):
    query: str
    mode: str
    expanded_terms: list[ExpansionTermModel]
    results: list[SearchResult]


class DocumentIn(BaseModel):
    title: str = Field(min_length=1)
    body: str
    url: str | None = None


class DocumentCreated(BaseModel):
    doc_id: str
    created: bool


class FromUrlIn(BaseModel):
    url: str = Field(min_length=1)


class UrlIngestResult(BaseModel):
    doc_id: str | None = None
    created: bool = False
    indexed: bool = False
    title: str
    body: str


class FeedbackIn(BaseModel):
    doc_id: str
    query: str = ""
    event: Literal["impression", "click", "rating", "view"]
    value: float | None = None


class FeedbackAccepted(BaseModel):
    status: str = "accepted"


class PopularityModel(BaseModel):
    clicks: int
    impressions: int
    rating_sum: float
    rating_count: int
    views: int


class DocumentOut(BaseModel):
    doc_id: str
    title: str
    body: str
    url: str | None = None
    popularity: PopularityModel
    ingested_at: float
