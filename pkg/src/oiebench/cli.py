"""Batch front end: import corpora and runs, evaluate, export, serve.

Exit codes: 0 success, 1 data or state error, 2 usage error. The store path
comes from --store, falling back to the OIEBENCH_STORE environment variable,
then ./oiebench-store.log.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

from .datasets import registry_warnings
from .errors import BenchError
from .exports import SCORES_CSV_HEADER, errors_csv, score_row, scores_csv
from .ingestion import parse_gold, parse_run
from .model import MatchStrategy
from .scoring import evaluate_run
from .service import _all_reports, _all_tallies, create_app
from .store import Store

DEFAULT_STORE = "oiebench-store.log"


def _store_path(args) -> Path:
    if args.store:
        return Path(args.store)
    return Path(os.environ.get("OIEBENCH_STORE", DEFAULT_STORE))


def _looks_like_run(path: Path) -> bool:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                head = json.loads(line)
            except json.JSONDecodeError:
                return False
            return isinstance(head, dict) and "system" in head and "dataset" in head
    return False


def cmd_import(args) -> int:
    store = Store(_store_path(args))
    path = Path(args.file)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        return 1
    if _looks_like_run(path):
        with open(path, "rb") as fh:
            head = json.loads(fh.readline())
            dataset = store.corpus(head["dataset"])
            fh.seek(0)
            run = parse_run(fh, dataset.meta, dataset.sentences)
        store.import_run(run, replace=args.replace)
        print(
            f"imported {len(run.extractions)} extractions "
            f"({run.system_name} on {run.dataset_name})"
        )
    else:
        name = args.name or path.stem.removesuffix(".gold")
        with open(path, "rb") as fh:
            corpus = parse_gold(fh, name, domain=args.domain)
        store.import_corpus(corpus, replace=args.replace)
        print(f"imported {corpus.meta.sentence_count} sentences, {corpus.meta.tuple_count} tuples")
        for note in registry_warnings(corpus.meta):
            print(f"warning: {note}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    store = Store(_store_path(args))
    run = store.run(args.dataset, args.system)
    corpus = store.corpus(args.dataset)
    report = evaluate_run(
        run,
        store.gold_tuples(args.dataset),
        MatchStrategy(args.strategy),
        sentence_ids=[s.id for s in corpus.sentences],
    )
    print(SCORES_CSV_HEADER)
    print(score_row(report))
    return 0


def cmd_report(args) -> int:
    store = Store(_store_path(args))
    if not store.runs:
        print("nothing to report: no runs imported", file=sys.stderr)
        return 1
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    reports = _all_reports(store)
    tallies = _all_tallies(store)
    gold_counts = {meta.name: len(store.gold_tuples(meta.name)) for meta in store.datasets()}
    scores_path = outdir / "scores.csv"
    errors_path = outdir / "errors.csv"
    scores_path.write_text(scores_csv(reports), encoding="utf-8")
    errors_path.write_text(errors_csv(tallies, gold_counts), encoding="utf-8")
    print(f"wrote {scores_path} ({len(reports)} rows)")
    print(f"wrote {errors_path} ({len(tallies)} columns)")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((args.host, args.port))
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    finally:
        probe.close()
    store = Store(_store_path(args))
    ui_dir = args.ui if args.ui and Path(args.ui).is_dir() else None
    app = create_app(store, ui_dir=ui_dir)
    print(f"serving on http://{args.host}:{args.port} (store {_store_path(args)})", flush=True)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oiebench",
        description="Benchmark open information extraction systems against gold corpora.",
    )
    parser.add_argument(
        "--store",
        default=None,
        help=f"event log path (default: $OIEBENCH_STORE or ./{DEFAULT_STORE})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_import = sub.add_parser("import", help="import a gold corpus or a system run file")
    p_import.add_argument("file", help="unified-format file; run files carry a header line")
    p_import.add_argument("--name", default=None, help="dataset name for gold files (default: file stem)")
    p_import.add_argument("--domain", default="", help="free-text domain note for gold files")
    p_import.add_argument("--replace", action="store_true", help="replace an existing import")
    p_import.set_defaults(func=cmd_import)

    p_eval = sub.add_parser("eval", help="score one system on one dataset")
    p_eval.add_argument("--dataset", required=True)
    p_eval.add_argument("--system", required=True)
    p_eval.add_argument(
        "--strategy",
        required=True,
        choices=[s.value for s in MatchStrategy],
        help="span matching strategy",
    )
    p_eval.set_defaults(func=cmd_eval)

    p_report = sub.add_parser("report", help="export scores.csv and errors.csv")
    p_report.add_argument("--all", action="store_true", help="export every dataset and system")
    p_report.add_argument("--out", required=True, help="output directory")
    p_report.set_defaults(func=cmd_report)

    p_serve = sub.add_parser("serve", help="run the annotation and reporting service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--log", dest="store_alias", default=None, help="alias for --store")
    p_serve.add_argument("--ui", default=None, help="directory with built web UI assets to serve")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "store_alias", None) and not args.store:
        args.store = args.store_alias
    try:
        return args.func(args)
    except BenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
