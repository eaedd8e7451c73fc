"""Command-line interface: kse serve|index|search|extract|eval|ontology.

Each verb is a thin wrapper over the library. Global settings come from
--config (JSON) and KSE_* environment variables; flags win over both.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

from . import evaluation as eval_mod
from . import index as index_store
from .config import load_config
from .engine import SearchEngine
from .errors import KseError
from .keywords import extract_keywords
from .ontology import expand_query, load_ontology
from .ranking import MODES, WEIGHTED, rank
from .textproc import Lexicon, StopList, tokenize_query


def _print_json(obj) -> None:
    print(json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True))


def _config_from(args, **overrides):
    merged = {
        "index": getattr(args, "index", None),
        "ontology": getattr(args, "ontology", None),
        "lexicon": getattr(args, "lexicon", None),
        "stoplist": getattr(args, "stoplist", None),
    }
    merged.update(overrides)
    return load_config(getattr(args, "config", None), **merged)


def _load_text_resources(cfg):
    return Lexicon.load(cfg.lexicon), StopList.load(cfg.stoplist)


# -- handlers -------------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = _config_from(
        args,
        host=args.host,
        port=args.port,
        static_dir=args.static_dir,
        defer_reindex=args.defer_reindex or None,
    )
    Path(cfg.index).mkdir(parents=True, exist_ok=True)
    app = create_app(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="info")
    return 0


def cmd_index_build(args) -> int:
    cfg = _config_from(args)
    lexicon, stops = _load_text_resources(cfg)
    builder = index_store.IndexBuilder(lexicon, stops)
    ids = builder.add_corpus_file(args.corpus, now=time.time())
    snapshot = builder.build()
    index_store.persist(snapshot, args.out)
    _print_json({"indexed": len(snapshot.documents), "out": str(args.out), "doc_ids": sorted(set(ids))})
    return 0


def cmd_index_add_url(args) -> int:
    cfg = _config_from(args, index=args.out)
    Path(cfg.index).mkdir(parents=True, exist_ok=True)
    engine = SearchEngine(cfg)
    doc_id, title, body, created = engine.add_url(args.url)
    _print_json(
        {"doc_id": doc_id, "created": created, "title": title, "body_preview": body[:200]}
    )
    return 0


def cmd_search(args) -> int:
    cfg = _config_from(args)
    lexicon, stops = _load_text_resources(cfg)
    snapshot = index_store.load(cfg.index)
    ont = load_ontology(cfg.ontology)
    eq, results = rank(
        args.q,
        snapshot,
        ont,
        cfg.ranking if args.top is None else dataclasses.replace(cfg.ranking, top_n=args.top),
        time.time(),
        lexicon,
        stops,
        mode=args.ranking,
        expansion=cfg.expansion,
        expand=not args.no_expand,
    )
    payload = {
        "query": args.q,
        "mode": args.ranking,
        "expanded_terms": [
            {"term": e.term, "weight": e.weight, "entity_id": e.entity_id, "relation": e.relation}
            for e in eq.expansion_terms
        ],
        "results": [],
    }
    for r in results:
        doc = snapshot.documents[r.doc_id]
        entry = {
            "doc_id": r.doc_id,
            "title": doc.title,
            "url": doc.url,
            "total": r.total,
            "snippet": r.snippet,
        }
        if args.explain and r.breakdown is not None:
            entry["breakdown"] = r.breakdown.to_dict()
        payload["results"].append(entry)
    _print_json(payload)
    return 0


def cmd_extract(args) -> int:
    cfg = _config_from(args, index=args.corpus)
    lexicon, stops = _load_text_resources(cfg)
    snapshot = index_store.load(cfg.index)
    raw = json.loads(Path(args.doc).read_text(encoding="utf-8"))
    doc_id = index_store.content_doc_id(raw["title"], raw["body"])
    if doc_id in snapshot.documents:
        doc = snapshot.documents[doc_id]
    else:
        doc = index_store.tokenize_document(
            doc_id, raw["title"], raw["body"], lexicon, stops
        )
    ks = extract_keywords(doc, snapshot.stats, k_title=args.k_title, k_body=args.k_body)
    _print_json(ks.to_dict())
    return 0


def cmd_eval_keywords(args) -> int:
    cfg = _config_from(args)
    snapshot = index_store.load(cfg.index)
    truth = eval_mod.load_ground_truth(args.truth, snapshot)
    reports = eval_mod.eval_keywords(snapshot, truth, k_title=args.k_title, k_body=args.k_body)
    if args.format == "json":
        _print_json({name: report.to_dict() for name, report in reports.items()})
    else:
        print(eval_mod.render_keyword_tables(reports))
    return 0


def cmd_eval_ranking(args) -> int:
    cfg = _config_from(args)
    lexicon, stops = _load_text_resources(cfg)
    snapshot = index_store.load(cfg.index)
    ont = load_ontology(cfg.ontology)
    truth = eval_mod.load_ground_truth(args.truth, snapshot)
    report = eval_mod.eval_ranking(
        snapshot, ont, cfg.ranking, truth, lexicon, stops, time.time(), mode=args.ranking
    )
    if args.format == "json":
        _print_json(report.to_dict())
    else:
        print(eval_mod.render_table(report, item_header="Query"))
    return 0


def cmd_ontology_validate(args) -> int:
    ont = load_ontology(args.path)
    _print_json(
        {
            "valid": True,
            "entities": len(ont.entities),
            "relations": len(ont.relations),
            "root": ont.root,
        }
    )
    return 0


def cmd_ontology_expand(args) -> int:
    cfg = _config_from(args)
    lexicon, stops = _load_text_resources(cfg)
    ont = load_ontology(cfg.ontology)
    eq = expand_query(tokenize_query(args.query, lexicon, stops), ont, cfg.expansion)
    _print_json(
        {
            "original_terms": [{"term": t, "weight": w} for t, w in eq.original_terms],
            "expansion_terms": [
                {"term": e.term, "weight": e.weight, "entity_id": e.entity_id, "relation": e.relation}
                for e in eq.expansion_terms
            ],
        }
    )
    return 0


# -- parser ---------------------------------------------------------------------


def _add_common(parser, *names):
    parser.add_argument("--config", default=None, help="JSON config file")
    if "index" in names:
        parser.add_argument("--index", default=None, help="index directory")
    if "ontology" in names:
        parser.add_argument("--ontology", default=None, help="ontology JSON file")
    parser.add_argument("--lexicon", default=None, help="segmentation lexicon file")
    parser.add_argument("--stoplist", default=None, help="stop-word list file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kse", description="Khmer semantic search engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    _add_common(p, "index", "ontology")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--static-dir", default=None, help="directory of web console assets")
    p.add_argument("--defer-reindex", action="store_true", help="batch document adds")
    p.set_defaults(func=cmd_serve)

    p_index = sub.add_parser("index", help="build or extend an index")
    index_sub = p_index.add_subparsers(dest="index_command", required=True)

    p = index_sub.add_parser("build", help="build an index from a JSONL corpus")
    _add_common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_index_build)

    p = index_sub.add_parser("add-url", help="fetch a page and add it to an index")
    _add_common(p, "ontology")
    p.add_argument("url")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_index_add_url)

    p = sub.add_parser("search", help="query an index")
    _add_common(p, "index", "ontology")
    p.add_argument("--q", required=True, help="query text")
    p.add_argument("--ranking", choices=MODES, default=WEIGHTED)
    p.add_argument("--top", type=int, default=None)
    p.add_argument("--explain", action="store_true", help="include score breakdowns")
    p.add_argument("--no-expand", action="store_true", help="disable ontology expansion")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("extract", help="extract keywords from a document")
    _add_common(p)
    p.add_argument("--doc", required=True, help="JSON file with title and body")
    p.add_argument("--corpus", required=True, help="index directory providing corpus stats")
    p.add_argument("--k-title", type=int, default=5)
    p.add_argument("--k-body", type=int, default=10)
    p.set_defaults(func=cmd_extract)

    p_eval = sub.add_parser("eval", help="evaluate against ground truth")
    eval_sub = p_eval.add_subparsers(dest="eval_command", required=True)

    p = eval_sub.add_parser("keywords", help="keyword extraction quality")
    _add_common(p, "index")
    p.add_argument("--truth", required=True)
    p.add_argument("--k-title", type=int, default=5)
    p.add_argument("--k-body", type=int, default=10)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_eval_keywords)

    p = eval_sub.add_parser("ranking", help="top-5 ranking quality")
    _add_common(p, "index", "ontology")
    p.add_argument("--truth", required=True)
    p.add_argument("--ranking", choices=MODES, default=WEIGHTED)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_eval_ranking)

    p_ont = sub.add_parser("ontology", help="inspect the ontology")
    ont_sub = p_ont.add_subparsers(dest="ontology_command", required=True)

    p = ont_sub.add_parser("validate", help="validate an ontology file")
    p.add_argument("path")
    p.set_defaults(func=cmd_ontology_validate)

    p = ont_sub.add_parser("expand", help="show the expansion of a query")
    _add_common(p, "ontology")
    p.add_argument("--query", required=True)
    p.set_defaults(func=cmd_ontology_expand)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KseError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
