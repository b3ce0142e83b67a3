"""Command-line interface.

Every ranked output is written to stdout as corpus-format document records
augmented with "rank" and "score" (and "slot"/"list" labels where relevant),
one JSON object per line, so command outputs pipe straight back into inputs
such as `op` and `ingest`. Provenance and diagnostics go to stderr. Exit code
0 on success, nonzero with a diagnostic otherwise.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import Config, load_config
from .corpus import document_record, dump_records, event_record, ingest, restore, snapshot
from .digest import daily_pane, weekly_digest
from .errors import EngineError, NotFoundError, ParseError
from .explore import EXPLORE_MODES, explore
from .listops import (
    OPERATORS,
    citation_helper,
    co_read,
    get_citation_lists,
    get_reference_lists,
    similar_to_combination,
)
from .ranking import RankedList
from .recommend import recommend_eight
from .search import ListFilter, edit, facets, parse_query, refine, run_query
from .service.state import load_bundle
from .vectorspace import build_space


def _config(args) -> Config:
    cfg = load_config(args.config) if getattr(args, "config", None) else load_config()
    if getattr(args, "now", None):
        cfg = replace(cfg, now=args.now)
    if getattr(args, "corpus", None):
        cfg = replace(cfg, corpus_path=args.corpus)
    return cfg


def _bundle(args):
    cfg = _config(args)
    if not cfg.corpus_path:
        raise ParseError("no corpus given: pass --corpus PATH or set LITSCOUT_CORPUS")
    return load_bundle(cfg)


def _emit_ranked(corpus, ranked: RankedList, extra: dict | None = None) -> None:
    print(f"# {ranked.provenance}", file=sys.stderr)
    for rank_no, (doc_id, score) in enumerate(ranked.items, start=1):
        rec = document_record(corpus.docs[doc_id])
        rec["rank"] = rank_no
        rec["score"] = score
        if extra:
            rec.update(extra)
        print(json.dumps(rec, sort_keys=True))


def _read_ids(path: str | None) -> list[str]:
    """Doc ids from a file or stdin: bare ids or any JSON records with an 'id'."""
    fh = open(path, encoding="utf-8") if path else sys.stdin
    try:
        ids: list[str] = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("{"):
                rec = json.loads(line)
                doc_id = rec.get("id") or rec.get("doc")
                if doc_id:
                    ids.append(doc_id)
            else:
                ids.append(line)
        return ids
    finally:
        if path:
            fh.close()


# -- commands ---------------------------------------------------------------


def cmd_ingest(args) -> int:
    corpus = None
    report = None
    for records_path in args.records:
        corpus, report = ingest(records_path, base=corpus)
        print(f"# ingested {records_path}: {json.dumps(report.as_dict())}", file=sys.stderr)
    out = snapshot(corpus, args.out)
    print(f"# snapshot written: {out}", file=sys.stderr)
    return 0


def cmd_snapshot(args) -> int:
    corpus, payload = restore(args.corpus)
    out = snapshot(corpus, args.out, model_payload=None if args.drop_model else payload)
    print(f"# snapshot rewritten: {out}", file=sys.stderr)
    return 0


def cmd_restore(args) -> int:
    corpus, payload = restore(args.corpus)
    dump_records(
        [document_record(d) for d in corpus.docs.values()]
        + [event_record(e) for e in corpus.events],
        sys.stdout,
    )
    print(
        f"# restored {args.corpus}: {len(corpus)} documents, {len(corpus.events)} events,"
        f" model={'yes' if payload else 'no'}",
        file=sys.stderr,
    )
    return 0


def cmd_build_space(args) -> int:
    cfg = _config(args)
    corpus, _ = restore(args.corpus)
    model = build_space(corpus, cfg.now_instant(), cfg)
    out = snapshot(corpus, args.out or args.corpus, model_payload=model.to_payload())
    print(
        f"# space trained: {len(model.trained_on)} docs, dims={model.dims},"
        f" converged={model.converged} after {model.iterations} iterations,"
        f" fallback={model.fallback}; written to {out}",
        file=sys.stderr,
    )
    return 0


def cmd_query(args) -> int:
    bnd = _bundle(args)
    spec = parse_query(args.q, bnd.index, sort=args.sort)
    ranked = run_query(
        bnd.corpus, bnd.index, spec, bnd.cfg.now_instant(),
        popular_window_days=bnd.cfg.popular_window_days, weights=bnd.cfg.weights,
    )
    if args.k is not None:
        ranked = ranked.truncated(args.k)
    _emit_ranked(bnd.corpus, ranked)
    if args.facets:
        summary = facets(
            bnd.corpus, ranked, spec.sort, now=bnd.cfg.now_instant(),
            popular_window_days=bnd.cfg.popular_window_days,
        )
        for dim, pairs in summary.by_dim.items():
            for value, count in pairs:
                print(f"# facet {dim}: {value} ({count})", file=sys.stderr)
    return 0


def cmd_explore(args) -> int:
    bnd = _bundle(args)
    spec = parse_query(args.q, bnd.index)
    out = explore(
        args.mode, bnd.corpus, bnd.index, spec, bnd.cfg.now_instant(),
        truncation=args.truncation or bnd.cfg.explore_truncation, k=args.k,
    )
    _emit_ranked(bnd.corpus, out)
    return 0


def cmd_op(args) -> int:
    bnd = _bundle(args)
    ids = _read_ids(args.ids_file)
    cfg = bnd.cfg
    now = cfg.now_instant()
    if args.op == "references":
        out = get_reference_lists(bnd.corpus, ids)
    elif args.op == "citations":
        out = get_citation_lists(bnd.corpus, ids)
    elif args.op == "coread":
        out = co_read(
            bnd.corpus, ids, now,
            window_days=args.window or cfg.coread_window_days,
            scientists_only=not args.all_readers,
            scientist_window_days=cfg.scientist_window_days,
            scientist_min_docs=cfg.scientist_min_docs,
            scientist_min_days=cfg.scientist_min_days,
        )
    elif args.op == "similar":
        out = similar_to_combination(bnd.corpus, bnd.index, ids, args.k)
    elif args.op == "helper":
        out = citation_helper(bnd.corpus, ids, args.n)
    else:  # argparse choices should prevent this
        raise ParseError(f"unknown operator: {args.op}")
    _emit_ranked(bnd.corpus, out)
    return 0


def cmd_refine(args) -> int:
    bnd = _bundle(args)
    ids = _read_ids(args.ids_file)
    for doc_id in ids:
        bnd.corpus.require(doc_id)
    ranked = RankedList(
        [(d, float(len(ids) - i)) for i, d in enumerate(dict.fromkeys(ids))],
        f"stdin list ({len(ids)} documents)",
    )
    flt = ListFilter(
        author=args.author,
        refereed=args.refereed,
        journals=frozenset(args.journal),
        entities=frozenset(args.entity),
        keywords=frozenset(args.keyword),
    )
    out = refine(bnd.corpus, ranked, flt)
    if args.remove or args.keep_top is not None or args.max_age_days is not None:
        out = edit(
            bnd.corpus, out,
            remove=tuple(args.remove),
            keep_top=args.keep_top,
            max_age_days=args.max_age_days,
            now=bnd.cfg.now_instant(),
        )
    _emit_ranked(bnd.corpus, out)
    return 0


def cmd_recs(args) -> int:
    bnd = _bundle(args)
    if bnd.model is None:
        raise NotFoundError("snapshot has no vector-space model; run build-space first")
    slots = recommend_eight(bnd.corpus, bnd.index, bnd.model, args.doc, bnd.cfg.now_instant(), cfg=bnd.cfg)
    for slot in slots:
        if slot.doc_id is None:
            print(f"# slot {slot.algorithm}: empty ({slot.reason})", file=sys.stderr)
            continue
        rec = document_record(bnd.corpus.docs[slot.doc_id])
        rec["slot"] = slot.algorithm
        rec["score"] = slot.score
        print(json.dumps(rec, sort_keys=True))
    return 0


def cmd_digest(args) -> int:
    cfg = _config(args)
    if args.profiles:
        cfg = replace(cfg, profiles_path=args.profiles)
    bnd = load_bundle(cfg)
    profile = bnd.profiles.get(args.user)
    if profile is None:
        raise NotFoundError(f"unknown profile: {args.user}")
    now = cfg.now_instant()
    if args.pane:
        lists = daily_pane(bnd.corpus, bnd.index, profile, args.view, now, k=args.k, cfg=cfg)
    else:
        lists = weekly_digest(bnd.corpus, bnd.index, profile, now, per_list=args.k, cfg=cfg)
    for ll in lists:
        if ll.reason:
            print(f"# list {ll.label}: empty ({ll.reason})", file=sys.stderr)
        else:
            print(f"# list {ll.label}: {ll.ranked.provenance}", file=sys.stderr)
        for rank_no, (doc_id, score) in enumerate(ll.ranked.items, start=1):
            rec = document_record(bnd.corpus.docs[doc_id])
            rec.update({"list": ll.label, "rank": rank_no, "score": score})
            print(json.dumps(rec, sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app_from_config

    cfg = _config(args)
    if args.port:
        cfg = replace(cfg, port=args.port)
    app = create_app_from_config(cfg, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=cfg.port, log_level="warning")
    return 0


# -- wiring --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litscout", description="scholarly search and recommendation engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True):
        p.add_argument("--config", help="YAML config file")
        p.add_argument("--now", help="pin the clock (RFC 3339) for reproducible windows")
        if corpus:
            p.add_argument("--corpus", help="corpus snapshot path (or LITSCOUT_CORPUS)")

    p = sub.add_parser("ingest", help="load record files and write a snapshot")
    p.add_argument("--records", nargs="+", required=True)
    p.add_argument("--out", required=True)
    common(p, corpus=False)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("snapshot", help="rewrite a snapshot file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--drop-model", action="store_true")
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("restore", help="dump a snapshot back to record lines")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_restore)

    p = sub.add_parser("build-space", help="train the recommendation space into the snapshot")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", help="defaults to rewriting --corpus")
    common(p, corpus=False)
    p.set_defaults(func=cmd_build_space)

    p = sub.add_parser("query", help="run a first-order query")
    p.add_argument("--q", required=True)
    p.add_argument("--sort", default="recent", choices=["recent", "relevant", "cited", "popular"])
    p.add_argument("--k", type=int)
    p.add_argument("--facets", action="store_true", help="print facet summary to stderr")
    common(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("explore", help="run an explore-the-field pipeline")
    p.add_argument("--mode", required=True, choices=list(EXPLORE_MODES))
    p.add_argument("--q", required=True)
    p.add_argument("--truncation", type=int)
    p.add_argument("--k", type=int)
    common(p)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("op", help="apply a list operator to ids from stdin or a file")
    p.add_argument("op", choices=list(OPERATORS))
    p.add_argument("--ids-file", help="defaults to stdin")
    p.add_argument("--k", type=int, default=50, help="similar: result size")
    p.add_argument("--n", type=int, default=10, help="helper: result size")
    p.add_argument("--window", type=int, help="coread: window days")
    p.add_argument("--all-readers", action="store_true", help="coread: disable the scientist filter")
    common(p)
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("refine", help="filter/edit an id list from stdin or a file")
    p.add_argument("--ids-file", help="defaults to stdin")
    p.add_argument("--author")
    p.add_argument("--journal", action="append", default=[])
    p.add_argument("--entity", action="append", default=[])
    p.add_argument("--keyword", action="append", default=[])
    p.add_argument("--refereed", type=lambda v: v.lower() == "true", default=None)
    p.add_argument("--remove", action="append", default=[])
    p.add_argument("--keep-top", type=int)
    p.add_argument("--max-age-days", type=int)
    common(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("recs", help="eight-slot recommendation panel for a document")
    p.add_argument("--doc", required=True)
    common(p)
    p.set_defaults(func=cmd_recs)

    p = sub.add_parser("digest", help="weekly digest or daily pane for a profile")
    p.add_argument("--user", required=True)
    p.add_argument("--profiles", help="profile record file (overrides config)")
    p.add_argument("--pane", action="store_true", help="daily pane instead of weekly digest")
    p.add_argument("--view", action="append", default=[], help="pane: recently viewed doc id")
    p.add_argument("--k", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_digest)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int)
    p.add_argument("--static", help="directory with the built web client")
    common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
