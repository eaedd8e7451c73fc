"""Precision / recall / F1 evaluation against manually curated ground truth.

Covers two tasks: keyword extraction (tool keywords vs manual keywords, per
field) and ranking quality (engine top-5 vs manual top-5, compared as sets).
Reports carry one row per evaluated item plus arithmetic-mean averages and
can be rendered as an aligned plain-text table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import GroundTruthError
from .index import IndexSnapshot
from .keywords import extract_keywords
from .ontology import ExpansionConfig, Ontology
from .ranking import WEIGHTED, RankingConfig, rank
from .textproc import Lexicon, StopList, normalize


@dataclass(frozen=True)
class GroundTruthSet:
    keyword_truth: dict[str, tuple[frozenset[str], frozenset[str]]]
    ranking_truth: dict[str, tuple[str, ...]]

    def validate_against(self, snapshot: IndexSnapshot) -> None:
        for doc_id in self.keyword_truth:
            if doc_id not in snapshot.documents:
                raise GroundTruthError(f"keyword truth references unknown document {doc_id!r}")
        for query, doc_ids in self.ranking_truth.items():
            for doc_id in doc_ids:
                if doc_id not in snapshot.documents:
                    raise GroundTruthError(
                        f"ranking truth for {query!r} references unknown document {doc_id!r}"
                    )


@dataclass(frozen=True)
class EvalRow:
    item_id: str
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    per_item: tuple[EvalRow, ...]
    averages: tuple[float, float, float]
    skipped: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "per_item": [
                {"id": r.item_id, "precision": r.precision, "recall": r.recall, "f1": r.f1}
                for r in self.per_item
            ],
            "averages": {
                "precision": self.averages[0],
                "recall": self.averages[1],
                "f1": self.averages[2],
            },
            "skipped": list(self.skipped),
        }


def prf(retrieved: set, relevant: set) -> tuple[float, float, float]:
    """Precision, recall and F1 of a retrieved set against a relevant set."""
    hits = len(set(retrieved) & set(relevant))
    precision = hits / len(retrieved) if retrieved else 0.0
    recall = hits / len(relevant) if relevant else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def _report(rows: list[EvalRow], skipped: tuple[str, ...] = ()) -> EvalReport:
    if rows:
        n = len(rows)
        averages = (
            sum(r.precision for r in rows) / n,
            sum(r.recall for r in rows) / n,
            sum(r.f1 for r in rows) / n,
        )
    else:
        averages = (0.0, 0.0, 0.0)
    return EvalReport(per_item=tuple(rows), averages=averages, skipped=skipped)


def eval_keywords(
    snapshot: IndexSnapshot,
    truth: GroundTruthSet,
    k_title: int = 5,
    k_body: int = 10,
) -> dict[str, EvalReport]:
    """Per-document P/R/F1 of extracted keywords vs manual keywords.

    Returns one report per field, keyed "title" and "body". Keywords are
    compared as normalized strings.
    """
    title_rows, body_rows = [], []
    for doc_id in sorted(truth.keyword_truth):
        if doc_id not in snapshot.documents:
            raise GroundTruthError(f"ground truth references unknown document {doc_id!r}")
        manual_title, manual_body = truth.keyword_truth[doc_id]
        ks = extract_keywords(snapshot.documents[doc_id], snapshot.stats, k_title, k_body)
        got_title = {term for term, _ in ks.title_keywords}
        got_body = {term for term, _ in ks.body_keywords}
        title_rows.append(EvalRow(doc_id, *prf(got_title, set(manual_title))))
        body_rows.append(EvalRow(doc_id, *prf(got_body, set(manual_body))))
    return {"title": _report(title_rows), "body": _report(body_rows)}


def eval_ranking(
    snapshot: IndexSnapshot,
    ont: Ontology,
    cfg: RankingConfig,
    truth: GroundTruthSet,
    lexicon: Lexicon,
    stops: StopList,
    now: float,
    queries: list[str] | None = None,
    mode: str = WEIGHTED,
    expansion: ExpansionConfig = ExpansionConfig(),
) -> EvalReport:
    """Per-query P/R/F1 of the engine's top results vs the manual top-5 set."""
    if not truth.ranking_truth:
        raise GroundTruthError("ranking truth is empty")
    if queries is None:
        queries = list(truth.ranking_truth)
    rows, skipped = [], []
    for query in queries:
        if query not in truth.ranking_truth:
            skipped.append(query)
            continue
        relevant = set(truth.ranking_truth[query])
        _, results = rank(query, snapshot, ont, cfg, now, lexicon, stops, mode=mode, expansion=expansion)
        retrieved = {r.doc_id for r in results}
        rows.append(EvalRow(query, *prf(retrieved, relevant)))
    return _report(rows, skipped=tuple(skipped))


def load_ground_truth(path: str | Path, snapshot: IndexSnapshot | None = None) -> GroundTruthSet:
    """Parse a JSONL ground-truth file and validate it (against the corpus,
    when a snapshot is supplied).

    Records are {"type": "keywords", "doc_id", "title_keywords", "body_keywords"}
    or {"type": "ranking", "query", "top5"}.
    """
    keyword_truth: dict[str, tuple[frozenset[str], frozenset[str]]] = {}
    ranking_truth: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise GroundTruthError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        kind = record.get("type")
        if kind == "keywords":
            doc_id = record.get("doc_id")
            if not doc_id:
                raise GroundTruthError(f"{path}:{lineno}: keywords record has no doc_id")
            keyword_truth[doc_id] = (
                frozenset(normalize(k) for k in record.get("title_keywords", [])),
                frozenset(normalize(k) for k in record.get("body_keywords", [])),
            )
        elif kind == "ranking":
            query = record.get("query")
            top5 = record.get("top5", [])
            if not query:
                raise GroundTruthError(f"{path}:{lineno}: ranking record has no query")
            if len(top5) > 5:
                raise GroundTruthError(f"{path}:{lineno}: top5 list has more than 5 entries")
            if len(set(top5)) != len(top5):
                raise GroundTruthError(f"{path}:{lineno}: duplicate doc_id in top5 list")
            ranking_truth[query] = tuple(top5)
        else:
            raise GroundTruthError(f"{path}:{lineno}: unknown record type {kind!r}")
    truth = GroundTruthSet(keyword_truth=keyword_truth, ranking_truth=ranking_truth)
    if snapshot is not None:
        truth.validate_against(snapshot)
    return truth


def render_table(report: EvalReport, item_header: str = "Item") -> str:
    """Aligned plain-text table: one row per item plus an Average row."""
    rows = [(r.item_id, r.precision, r.recall, r.f1) for r in report.per_item]
    rows.append(("Average", *report.averages))
    id_width = max(len(item_header), *(len(str(r[0])) for r in rows))
    lines = [f"{item_header:<{id_width}}  Precision  Recall  F1"]
    for item_id, p, rc, f1 in rows:
        lines.append(f"{item_id:<{id_width}}  {p:>9.2f}  {rc:>6.2f}  {f1:>4.2f}")
    return "\n".join(lines)


def render_keyword_tables(reports: dict[str, EvalReport]) -> str:
    sections = []
    for field_name in ("title", "body"):
        sections.append(field_name.capitalize())
        sections.append(render_table(reports[field_name], item_header="Document ID"))
    return "\n".join(sections)
