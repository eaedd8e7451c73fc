"""Document store and field-separated inverted index with snapshot persistence.

Documents are deduplicated by a content hash of (title, body). A snapshot is
an immutable index built in one pass; rebuilding from the same inputs gives
byte-identical files, so snapshots can be diffed and checksummed. On disk a
snapshot is a directory of manifest.json, documents.jsonl, postings.jsonl and
checksums.json.
"""

from __future__ import annotations

import hashlib
import json
import time
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import IndexFormatError
from .htmltext import extract_title_body
from .keywords import CorpusStats
from .textproc import Lexicon, StopList, Token, TokenStream, remove_stop_words, segment

FORMAT_VERSION = "kse-index/1"

MANIFEST_FILE = "manifest.json"
DOCUMENTS_FILE = "documents.jsonl"
POSTINGS_FILE = "postings.jsonl"
CHECKSUMS_FILE = "checksums.json"


@dataclass(frozen=True)
class Popularity:
    clicks: int = 0
    impressions: int = 0
    rating_sum: float = 0.0
    rating_count: int = 0
    views: int = 0

    def __post_init__(self):
        if self.clicks > self.impressions:
            raise ValueError("clicks cannot exceed impressions")
        if self.rating_count == 0 and self.rating_sum != 0.0:
            raise ValueError("rating_sum must be 0 when there are no ratings")

    def to_dict(self) -> dict:
        return {
            "clicks": self.clicks,
            "impressions": self.impressions,
            "rating_sum": self.rating_sum,
            "rating_count": self.rating_count,
            "views": self.views,
        }

    @classmethod
    def from_dict(cls, data: dict | None) -> "Popularity":
        data = data or {}
        return cls(
            clicks=int(data.get("clicks", 0)),
            impressions=int(data.get("impressions", 0)),
            rating_sum=float(data.get("rating_sum", 0.0)),
            rating_count=int(data.get("rating_count", 0)),
            views=int(data.get("views", 0)),
        )


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    body: str
    url: str | None = None
    title_tokens: TokenStream | None = None
    body_tokens: TokenStream | None = None
    popularity: Popularity = field(default_factory=Popularity)
    ingested_at: float = 0.0

    def __post_init__(self):
        if not self.title:
            raise ValueError("document title must be non-empty")


@dataclass(frozen=True)
class Posting:
    doc_id: str
    tf_title: int = 0
    tf_body: int = 0

    def __post_init__(self):
        if self.tf_title + self.tf_body < 1:
            raise ValueError("posting must have at least one occurrence")


@dataclass(frozen=True)
class IndexSnapshot:
    """Immutable inverted index over titles and bodies plus corpus stats."""

    postings: dict[str, tuple[Posting, ...]]
    stats: CorpusStats
    documents: dict[str, Document]
    version: str = FORMAT_VERSION


def content_doc_id(title: str, body: str) -> str:
    digest = hashlib.sha256()
    digest.update(title.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(body.encode("utf-8"))
    return digest.hexdigest()[:16]


def tokenize_document(
    doc_id: str,
    title: str,
    body: str,
    lexicon: Lexicon,
    stops: StopList,
    url: str | None = None,
    popularity: Popularity | None = None,
    ingested_at: float = 0.0,
) -> Document:
    """Run both fields through the text pipeline and build a Document."""
    return Document(
        doc_id=doc_id,
        title=title,
        body=body,
        url=url,
        title_tokens=remove_stop_words(segment(title, lexicon, field="title"), stops),
        body_tokens=remove_stop_words(segment(body, lexicon, field="body"), stops),
        popularity=popularity or Popularity(),
        ingested_at=ingested_at,
    )


class IndexBuilder:
    """Single-writer staging area that assembles immutable snapshots."""

    def __init__(self, lexicon: Lexicon, stops: StopList):
        self.lexicon = lexicon
        self.stops = stops
        self._staged: dict[str, Document] = {}

    def __len__(self) -> int:
        return len(self._staged)

    def add_document(
        self,
        title: str,
        body: str,
        url: str | None = None,
        now: float | None = None,
        popularity: Popularity | None = None,
    ) -> str:
        """Stage a document; identical (title, body) content is a no-op."""
        if not title:
            raise ValueError("document title must be non-empty")
        doc_id = content_doc_id(title, body)
        if doc_id not in self._staged:
            self._staged[doc_id] = tokenize_document(
                doc_id,
                title,
                body,
                self.lexicon,
                self.stops,
                url=url,
                popularity=popularity,
                ingested_at=time.time() if now is None else now,
            )
        return doc_id

    def add_existing(self, doc: Document) -> str:
        """Stage an already-tokenized document (used when rebuilding)."""
        self._staged.setdefault(doc.doc_id, doc)
        return doc.doc_id

    def add_corpus_file(self, path: str | Path, now: float | None = None) -> list[str]:
        """Stage documents from a JSONL corpus file, one object per line."""
        ids = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IndexFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if "title" not in record or "body" not in record:
                raise IndexFormatError(f"{path}:{lineno}: record needs title and body")
            ids.append(
                self.add_document(
                    record["title"],
                    record["body"],
                    url=record.get("url"),
                    now=record.get("ingested_at", now),
                    popularity=Popularity.from_dict(record.get("popularity")),
                )
            )
        return ids

    def build(self) -> IndexSnapshot:
        return build_snapshot(self._staged.values())


def build_snapshot(documents) -> IndexSnapshot:
    """Assemble postings and corpus stats from tokenized documents."""
    docs = {d.doc_id: d for d in documents}
    counts: dict[str, dict[str, list[int]]] = defaultdict(dict)
    for doc_id in sorted(docs):
        doc = docs[doc_id]
        for token in doc.title_tokens:
            counts[token.normalized].setdefault(doc_id, [0, 0])[0] += 1
        for token in doc.body_tokens:
            counts[token.normalized].setdefault(doc_id, [0, 0])[1] += 1
    postings = {
        term: tuple(
            Posting(doc_id, tf_title=tfs[0], tf_body=tfs[1])
            for doc_id, tfs in sorted(per_doc.items())
        )
        for term, per_doc in counts.items()
    }
    return IndexSnapshot(postings=postings, stats=_stats_from_postings(postings, len(docs)), documents=docs)


def _stats_from_postings(postings: dict[str, tuple[Posting, ...]], doc_count: int) -> CorpusStats:
    df_title: dict[str, int] = {}
    df_body: dict[str, int] = {}
    df_pooled: dict[str, int] = {}
    for term, plist in postings.items():
        title_n = sum(1 for p in plist if p.tf_title >= 1)
        body_n = sum(1 for p in plist if p.tf_body >= 1)
        if title_n:
            df_title[term] = title_n
        if body_n:
            df_body[term] = body_n
        df_pooled[term] = len(plist)
    return CorpusStats(doc_count=doc_count, df_title=df_title, df_body=df_body, df_pooled=df_pooled)


def lookup(term: str, snapshot: IndexSnapshot) -> tuple[Posting, ...]:
    """Postings for the normalized term; unknown terms give an empty tuple."""
    from .textproc import normalize

    if not term:
        return ()
    return snapshot.postings.get(normalize(term), ())


def ingest_url(url: str, fetched_html: str) -> tuple[str, str]:
    """Extract (title, body) from already-fetched page HTML."""
    return extract_title_body(fetched_html)


# -- persistence ---------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def _tokens_to_json(stream: TokenStream) -> list:
    return [[t.surface, t.normalized, t.offset, t.oov] for t in stream]


def _tokens_from_json(rows: list, field_name: str) -> TokenStream:
    return TokenStream(
        tokens=tuple(Token(r[0], r[1], r[2], field_name, bool(r[3])) for r in rows)
    )


def _doc_to_json(doc: Document) -> dict:
    return {
        "doc_id": doc.doc_id,
        "url": doc.url,
        "title": doc.title,
        "body": doc.body,
        "ingested_at": doc.ingested_at,
        "popularity": doc.popularity.to_dict(),
        "title_tokens": _tokens_to_json(doc.title_tokens),
        "body_tokens": _tokens_to_json(doc.body_tokens),
    }


def _doc_from_json(record: dict) -> Document:
    return Document(
        doc_id=record["doc_id"],
        url=record.get("url"),
        title=record["title"],
        body=record["body"],
        ingested_at=record.get("ingested_at", 0.0),
        popularity=Popularity.from_dict(record.get("popularity")),
        title_tokens=_tokens_from_json(record["title_tokens"], "title"),
        body_tokens=_tokens_from_json(record["body_tokens"], "body"),
    )


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def persist(snapshot: IndexSnapshot, path: str | Path) -> None:
    """Write a snapshot directory; output is deterministic for equal inputs."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)

    manifest = {"version": snapshot.version, "doc_count": len(snapshot.documents)}
    (out / MANIFEST_FILE).write_text(_dumps(manifest) + "\n", encoding="utf-8")

    doc_lines = [_dumps(_doc_to_json(snapshot.documents[i])) for i in sorted(snapshot.documents)]
    (out / DOCUMENTS_FILE).write_text("".join(line + "\n" for line in doc_lines), encoding="utf-8")

    posting_lines = [
        _dumps({"term": term, "postings": [[p.doc_id, p.tf_title, p.tf_body] for p in plist]})
        for term, plist in sorted(snapshot.postings.items())
    ]
    (out / POSTINGS_FILE).write_text("".join(line + "\n" for line in posting_lines), encoding="utf-8")

    checksums = {
        name: _sha256_file(out / name)
        for name in (MANIFEST_FILE, DOCUMENTS_FILE, POSTINGS_FILE)
    }
    (out / CHECKSUMS_FILE).write_text(_dumps(checksums) + "\n", encoding="utf-8")


def has_snapshot(path: str | Path) -> bool:
    return (Path(path) / MANIFEST_FILE).exists()


def load(path: str | Path) -> IndexSnapshot:
    """Load a snapshot directory, verifying checksums, version and invariants."""
    base = Path(path)
    checksums_path = base / CHECKSUMS_FILE
    if not checksums_path.exists():
        raise IndexFormatError(f"{base}: missing {CHECKSUMS_FILE}")
    try:
        checksums = json.loads(checksums_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"{checksums_path}: invalid JSON: {exc}") from exc

    for name in (MANIFEST_FILE, DOCUMENTS_FILE, POSTINGS_FILE):
        file_path = base / name
        if not file_path.exists():
            raise IndexFormatError(f"{base}: missing or truncated {name}")
        expected = checksums.get(name)
        actual = _sha256_file(file_path)
        if expected != actual:
            raise IndexFormatError(f"{base}/{name}: checksum mismatch")

    manifest = json.loads((base / MANIFEST_FILE).read_text(encoding="utf-8"))
    version = manifest.get("version")
    if version != FORMAT_VERSION:
        raise IndexFormatError(
            f"{base}: unsupported index version {version!r} (expected {FORMAT_VERSION})"
        )

    documents: dict[str, Document] = {}
    for lineno, line in enumerate((base / DOCUMENTS_FILE).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = _doc_from_json(json.loads(line))
        except (json.JSONDecodeError, KeyError) as exc:
            raise IndexFormatError(f"{base}/{DOCUMENTS_FILE}:{lineno}: {exc}") from exc
        documents[doc.doc_id] = doc

    postings: dict[str, tuple[Posting, ...]] = {}
    for lineno, line in enumerate((base / POSTINGS_FILE).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            plist = tuple(Posting(d, tf_title=t, tf_body=b) for d, t, b in record["postings"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise IndexFormatError(f"{base}/{POSTINGS_FILE}:{lineno}: {exc}") from exc
        postings[record["term"]] = plist

    snapshot = IndexSnapshot(
        postings=postings,
        stats=_stats_from_postings(postings, len(documents)),
        documents=documents,
        version=version,
    )
    _check_invariants(snapshot, base)
    return snapshot


def _check_invariants(snapshot: IndexSnapshot, origin: Path) -> None:
    for term, plist in snapshot.postings.items():
        ids = [p.doc_id for p in plist]
        if ids != sorted(ids):
            raise IndexFormatError(f"{origin}: postings for {term!r} are not sorted by doc_id")
        for posting in plist:
            if posting.doc_id not in snapshot.documents:
                raise IndexFormatError(
                    f"{origin}: posting for {term!r} references unknown document {posting.doc_id!r}"
                )


def with_popularity(doc: Document, popularity: Popularity) -> Document:
    return replace(doc, popularity=popularity)
