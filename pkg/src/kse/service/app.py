"""FastAPI service wrapping the search engine.

Every error response carries a machine-readable {"error", "detail"} body.
Search runs against an immutable snapshot; document additions rebuild the
index and swap the snapshot atomically, and impressions are recorded
server-side for every result returned so click-through rates have a
denominator without any client cooperation.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import HTTPException, RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..config import ServiceConfig
from ..engine import FetchError, OversizedError, SearchEngine, UnknownDocumentError
from ..errors import EmptyQueryError, StateError
from ..htmltext import ExtractionError
from ..ranking import MODES
from .schemas import (
    DocumentCreated,
    DocumentIn,
    DocumentOut,
    ErrorBody,
    FeedbackAccepted,
    FeedbackIn,
    FromUrlIn,
    HealthResponse,
    PopularityModel,
    SearchResponse,
    SearchResult,
    UrlIngestResult,
)


def _error(status_code: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content=ErrorBody(error=error, detail=detail).model_dump(),
    )


def create_app(config: ServiceConfig, fetcher=None) -> FastAPI:
    engine = SearchEngine(config, fetcher=fetcher)
    app = FastAPI(title="Khmer semantic search engine", version="0.1.0")
    app.state.engine = engine

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(HTTPException)
    async def http_exception_handler(request: Request, exc: HTTPException):
        return _error(exc.status_code, "http_error", str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return _error(422, "validation_error", str(exc.errors()))

    @app.exception_handler(StateError)
    async def state_handler(request: Request, exc: StateError):
        return _error(409, "index_not_built", str(exc))

    @app.exception_handler(EmptyQueryError)
    async def empty_query_handler(request: Request, exc: EmptyQueryError):
        return _error(400, "empty_query", str(exc))

    @app.exception_handler(UnknownDocumentError)
    async def unknown_doc_handler(request: Request, exc: UnknownDocumentError):
        return _error(404, "unknown_document", str(exc))

    @app.exception_handler(FetchError)
    async def fetch_handler(request: Request, exc: FetchError):
        return _error(502, "fetch_failed", str(exc))

    @app.exception_handler(OversizedError)
    async def oversized_handler(request: Request, exc: OversizedError):
        return _error(413, "oversized", str(exc))

    @app.exception_handler(ExtractionError)
    async def extraction_handler(request: Request, exc: ExtractionError):
        return _error(422, "extraction_failed", str(exc))

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse()

    @app.get("/search", response_model=SearchResponse, response_model_exclude_none=True)
    def search(
        q: str = Query(default=""),
        mode: str = Query(default="weighted"),
        top: int = Query(default=None, ge=1, le=100),
        explain: int = Query(default=0),
        expand: int = Query(default=1),
    ):
        if not q.strip():
            return _error(400, "empty_query", "query parameter q is empty")
        if mode not in MODES:
            return _error(422, "unknown_mode", f"mode must be one of {', '.join(MODES)}")
        eq, ranked = engine.search(q, mode=mode, top=top, expand=bool(expand))
        snapshot = engine.snapshot
        results = []
        for r in ranked:
            doc = snapshot.documents[r.doc_id]
            results.append(
                SearchResult(
                    doc_id=r.doc_id,
                    title=doc.title,
                    url=doc.url,
                    snippet=r.snippet,
                    total=r.total,
                    breakdown=(
                        r.breakdown.to_dict() if (explain and r.breakdown is not None) else None
                    ),
                )
            )
        return SearchResponse(
            query=q,
            mode=mode,
            expanded_terms=[
                {
                    "term": e.term,
                    "weight": e.weight,
                    "entity_id": e.entity_id,
                    "relation": e.relation,
                }
                for e in eq.expansion_terms
            ],
            results=results,
        )

    @app.post("/documents", response_model=DocumentCreated)
    def add_document(payload: DocumentIn, response: JSONResponse = None):
        if len(payload.body.encode("utf-8")) > config.fetch_limit_bytes:
            raise OversizedError(
                f"document body exceeds {config.fetch_limit_bytes} bytes"
            )
        doc_id, created = engine.add_document(payload.title, payload.body, url=payload.url)
        return JSONResponse(
            status_code=201 if created else 200,
            content=DocumentCreated(doc_id=doc_id, created=created).model_dump(),
        )

    @app.post("/documents/from-url", response_model=UrlIngestResult)
    def add_from_url(payload: FromUrlIn, index: int = Query(default=1)):
        doc_id, title, body, created = engine.add_url(payload.url, do_index=bool(index))
        result = UrlIngestResult(
            doc_id=doc_id, created=created, indexed=doc_id is not None, title=title, body=body
        )
        return JSONResponse(
            status_code=201 if created else 200, content=result.model_dump()
        )

    @app.post("/feedback", response_model=FeedbackAccepted, status_code=202)
    def feedback(payload: FeedbackIn):
        try:
            engine.record_feedback(
                payload.doc_id, payload.query, payload.event, value=payload.value
            )
        except ValueError as exc:
            return _error(400, "invalid_feedback", str(exc))
        return JSONResponse(status_code=202, content=FeedbackAccepted().model_dump())

    @app.get("/documents/{doc_id}", response_model=DocumentOut)
    def get_document(doc_id: str):
        doc = engine.get_document(doc_id)
        return DocumentOut(
            doc_id=doc.doc_id,
            title=doc.title,
            body=doc.body,
            url=doc.url,
            popularity=PopularityModel(**doc.popularity.to_dict()),
            ingested_at=doc.ingested_at,
        )

    static_dir = config.static_dir
    if static_dir is not None and static_dir.exists():
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
