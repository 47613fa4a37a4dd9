"""HTTP interface for browsing, judging, annotating, and exporting.

Payloads reuse the unified record grammar from ingestion; there is no second
schema. Mutations funnel through the store's single-writer append; reads are
served from the materialized state and are side-effect free. Judge identity
arrives in the ``X-Judge-Id`` header (trusted setting, no authentication).
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from fastapi import FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import (
    BenchError,
    DuplicateError,
    JudgmentRuleError,
    SpanError,
    UnknownIdError,
)
from .exports import (
    DEFAULT_CHART_AXES,
    chart_series,
    errors_csv,
    report_to_obj,
    scores_csv,
)
from .ingestion import tuple_to_obj
from .model import ErrorClass, Extraction, Judgment, MatchStrategy, SystemRun
from .scoring import evaluate_run, tally_errors
from .store import Store, judgment_to_obj


def system_color(name: str) -> str:
    """Deterministic legend color per system name; stable across runs."""
    hue = int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:4], "big") % 360
    return f"hsl({hue}, 70%, 45%)"


def _split_uid(uid: str) -> tuple[str, str]:
    if ":" not in uid:
        raise UnknownIdError(f"sentence uid {uid!r} must look like 'dataset:sent_id'")
    dataset, sent_id = uid.split(":", 1)
    return dataset, sent_id


def _strategy(token: str) -> MatchStrategy:
    try:
        return MatchStrategy(token)
    except ValueError:
        raise UnknownIdError(
            f"unknown strategy {token!r}; expected one of "
            f"{', '.join(s.value for s in MatchStrategy)}"
        ) from None


def _judgments_for_run(store: Store, run: SystemRun, gold_ids: set[str]) -> list[Judgment]:
    extraction_ids = {t.id for t in run.extractions}
    picked = []
    for j in store.judgments_list():
        if j.target_kind == "extraction" and j.target_id in extraction_ids:
            picked.append(j)
        elif j.target_kind == "gold" and j.system == run.system_name and j.target_id in gold_ids:
            picked.append(j)
    return picked


def _all_reports(store: Store, datasets=None, systems=None, strategies=None):
    reports = []
    for (dataset, system), run in store.runs_items():
        if datasets and dataset not in datasets:
            continue
        if systems and system not in systems:
            continue
        corpus = store.corpus(dataset)
        gold = store.gold_tuples(dataset)
        sentence_ids = [s.id for s in corpus.sentences]
        for strategy in strategies or list(MatchStrategy):
            reports.append(evaluate_run(run, gold, strategy, sentence_ids=sentence_ids))
    return reports


def _all_tallies(store: Store, datasets=None):
    tallies = []
    for (dataset, _), run in store.runs_items():
        if datasets and dataset not in datasets:
            continue
        gold = store.gold_tuples(dataset)
        judgments = _judgments_for_run(store, run, {g.id for g in gold})
        tallies.append(tally_errors(judgments, run, gold))
    return tallies


def create_app(store: Store, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="oiebench", version="0.1.0")

    @app.exception_handler(UnknownIdError)
    async def _unknown(request: Request, exc: UnknownIdError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(BenchError)
    async def _invalid(request: Request, exc: BenchError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/datasets")
    def list_datasets():
        return [
            {
                "name": m.name,
                "type": m.kind,
                "domain": m.domain,
                "sentence_count": m.sentence_count,
                "tuple_count": m.tuple_count,
            }
            for m in store.datasets()
        ]

    @app.get("/datasets/{name}/sentences")
    def get_sentences(name: str, page: int = Query(1, ge=1), page_size: int = Query(50, ge=1)):
        corpus = store.corpus(name)
        gold = store.gold_tuples(name)
        gold_by_sentence: dict[str, int] = {}
        for g in gold:
            gold_by_sentence[g.sentence_id] = gold_by_sentence.get(g.sentence_id, 0) + 1
        counts: dict[str, dict[str, int]] = {}
        for run in store.runs_for(name):
            for t in run.extractions:
                per = counts.setdefault(t.sentence_id, {})
                per[run.system_name] = per.get(run.system_name, 0) + 1
        ordered = sorted(corpus.sentences, key=lambda s: (s.document_id, s.index))
        start = (page - 1) * page_size
        page_items = ordered[start:start + page_size]
        return {
            "total": len(ordered),
            "page": page,
            "page_size": page_size,
            "sentences": [
                {
                    "uid": f"{name}:{s.id}",
                    "sent_id": s.id,
                    "doc_id": s.document_id,
                    "sent_idx": s.index,
                    "text": s.text,
                    "gold_count": gold_by_sentence.get(s.id, 0),
                    "systems": counts.get(s.id, {}),
                }
                for s in page_items
            ],
        }

    @app.get("/sentences/{uid:path}/annotations")
    def get_sentence_annotations(uid: str):
        dataset, sent_id = _split_uid(uid)
        corpus = store.corpus(dataset)
        sentence = corpus.sentence_by_id.get(sent_id)
        if sentence is None:
            raise UnknownIdError(f"unknown sentence {sent_id!r} in dataset {dataset!r}")

        def tuple_obj(t: Extraction) -> dict:
            obj = tuple_to_obj(t)
            obj["id"] = t.id
            obj["provenance"] = t.provenance
            return obj

        gold = [t for t in store.gold_tuples(dataset) if t.sentence_id == sent_id]
        systems = []
        sentence_extraction_ids = set()
        for run in store.runs_for(dataset):
            tuples = [t for t in run.extractions if t.sentence_id == sent_id]
            sentence_extraction_ids.update(t.id for t in tuples)
            if tuples:
                systems.append(
                    {
                        "system": run.system_name,
                        "color": system_color(run.system_name),
                        "tuples": [tuple_obj(t) for t in tuples],
                    }
                )
        gold_ids = {t.id for t in gold}
        judgments = [
            judgment_to_obj(j)
            for j in store.judgments_list()
            if (j.target_kind == "extraction" and j.target_id in sentence_extraction_ids)
            or (j.target_kind == "gold" and j.target_id in gold_ids)
        ]
        return {
            "uid": uid,
            "dataset": dataset,
            "doc_id": sentence.document_id,
            "sent_idx": sentence.index,
            "sent_id": sentence.id,
            "text": sentence.text,
            "gold": [tuple_obj(t) for t in gold],
            "systems": systems,
            "judgments": judgments,
        }

    @app.post("/judgments")
    def submit_judgment(body: dict, x_judge_id: str | None = Header(None)):
        if not x_judge_id:
            raise JudgmentRuleError("header X-Judge-Id is required to submit judgments")
        try:
            labels = [
                (part, ErrorClass(cls)) for part, cls in body.get("labels", [])
            ]
        except (TypeError, ValueError) as exc:
            raise JudgmentRuleError(f"malformed labels: {exc}") from None
        for field in ("target_kind", "target_id", "correct"):
            if field not in body:
                raise JudgmentRuleError(f"missing field {field!r}")
        judgment = store.record_judgment(
            target_kind=body["target_kind"],
            target_id=body["target_id"],
            judge_id=x_judge_id,
            correct=bool(body["correct"]),
            labels=labels,
            system=body.get("system"),
            comment=body.get("comment"),
        )
        return judgment_to_obj(judgment)

    def _annotation_spans(body: dict) -> tuple[tuple[int, int], list[tuple[int, int]]]:
        def offsets(obj, what: str) -> tuple[int, int]:
            if not isinstance(obj, dict) or "start" not in obj or "end" not in obj:
                raise SpanError(f"{what} must be an object with 'start' and 'end'")
            return int(obj["start"]), int(obj["end"])

        if "predicate" not in body:
            raise SpanError("annotation needs a predicate span")
        predicate = offsets(body["predicate"], "predicate")
        args = [offsets(a, f"argument {i}") for i, a in enumerate(body.get("args", []))]
        return predicate, args

    def _annotation_response(annotation: Extraction, dataset: str) -> dict:
        obj = tuple_to_obj(annotation)
        obj["id"] = annotation.id
        obj["uid"] = f"{dataset}:{annotation.sentence_id}"
        obj["provenance"] = annotation.provenance
        return obj

    @app.post("/annotations")
    def create_annotation(body: dict):
        if "uid" in body:
            dataset, sent_id = _split_uid(body["uid"])
        elif "dataset" in body and "sent_id" in body:
            dataset, sent_id = body["dataset"], body["sent_id"]
        else:
            raise SpanError("annotation needs 'uid' or 'dataset' plus 'sent_id'")
        predicate, args = _annotation_spans(body)
        annotation = store.create_annotation(dataset, sent_id, predicate, args)
        return _annotation_response(annotation, dataset)

    @app.put("/annotations/{annotation_id:path}")
    def update_annotation(annotation_id: str, body: dict):
        if annotation_id not in store.annotations:
            raise UnknownIdError(f"unknown annotation {annotation_id!r}")
        predicate, args = _annotation_spans(body)
        annotation = store.update_annotation(annotation_id, predicate, args)
        return _annotation_response(annotation, store.annotations[annotation_id][0])

    @app.delete("/annotations/{annotation_id:path}")
    def delete_annotation(annotation_id: str):
        store.delete_annotation(annotation_id)
        return {"deleted": annotation_id}

    @app.get("/reports")
    def get_reports(
        dataset: str | None = None, system: str | None = None, strategy: str | None = None
    ):
        if dataset is not None:
            store.corpus(dataset)  # 404 on unknown
        if system is not None and not any(s == system for (_, s), _ in store.runs_items()):
            raise UnknownIdError(f"unknown system {system!r}")
        strategies = [_strategy(strategy)] if strategy else None
        reports = _all_reports(
            store,
            datasets={dataset} if dataset else None,
            systems={system} if system else None,
            strategies=strategies,
        )
        return {"reports": [report_to_obj(r) for r in reports]}

    @app.get("/charts")
    def get_charts(
        dataset: str | None = None,
        crop_at: int | None = Query(None, ge=0),
        kind: str = "kiviat",
        axes: str | None = None,
    ):
        if dataset is not None:
            store.corpus(dataset)
        if axes:
            try:
                axis_list = tuple(ErrorClass(a) for a in axes.split(","))
            except ValueError as exc:
                raise UnknownIdError(f"unknown error class in axes: {exc}") from None
        else:
            axis_list = DEFAULT_CHART_AXES
        tallies = _all_tallies(store, datasets={dataset} if dataset else None)
        return chart_series(tallies, axes=axis_list, crop_at=crop_at, kind=kind)

    @app.get("/export/scores.csv")
    def export_scores(
        dataset: str | None = None, system: str | None = None, strategy: str | None = None
    ):
        strategies = [_strategy(strategy)] if strategy else None
        reports = _all_reports(
            store,
            datasets={dataset} if dataset else None,
            systems={system} if system else None,
            strategies=strategies,
        )
        return PlainTextResponse(scores_csv(reports), media_type="text/csv")

    @app.get("/export/errors.csv")
    def export_errors(dataset: str | None = None):
        tallies = _all_tallies(store, datasets={dataset} if dataset else None)
        gold_counts = {
            meta.name: len(store.gold_tuples(meta.name)) for meta in store.datasets()
        }
        return PlainTextResponse(errors_csv(tallies, gold_counts), media_type="text/csv")

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
