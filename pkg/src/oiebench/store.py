"""Durable, append-only persistence with full replay at startup.

Everything that changes state is an event: corpus imports, run imports,
judgments, and manual annotation edits. The log is the single source of
truth; the in-memory state is a fold over it, rebuilt on open. Judgments are
never edited in place: a judge's revision is a new event that supersedes the
old one by (judge, target, system) key.

Log framing: a header record followed by one record per event, each encoded
as the decimal byte length of a UTF-8 JSON payload, a newline, the payload,
and a trailing newline. Events carry dense sequence numbers starting at 0;
any deviation on replay halts with the damaged position.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    DuplicateError,
    JudgmentRuleError,
    LogCorruptionError,
    SpanError,
    UnknownIdError,
)
from .ingestion import ParsedCorpus, parse_sentence_record, sentence_to_record, tuple_to_obj
from .model import (
    DatasetMeta,
    ErrorClass,
    Extraction,
    Judgment,
    Sentence,
    Span,
    SystemRun,
    make_span,
    validate_judgment,
)

_HEADER = {"format": "oiebench-log", "version": 1}


class EventKind(str, Enum):
    CORPUS_IMPORTED = "corpus_imported"
    RUN_IMPORTED = "run_imported"
    JUDGMENT_RECORDED = "judgment_recorded"
    ANNOTATION_CREATED = "annotation_created"
    ANNOTATION_UPDATED = "annotation_updated"
    ANNOTATION_DELETED = "annotation_deleted"


@dataclass(frozen=True)
class StoreEvent:
    seq: int
    kind: EventKind
    payload: dict
    timestamp: float

    def to_obj(self) -> dict:
        return {
            "seq": self.seq,
            "kind": self.kind.value,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }


def _frame(obj: dict) -> bytes:
    payload = json.dumps(obj, ensure_ascii=False, sort_keys=True).encode("utf-8")
    return str(len(payload)).encode("ascii") + b"\n" + payload + b"\n"


def read_log(path: Path) -> list[dict]:
    """Decode all framed records; raises LogCorruptionError on damage."""
    records: list[dict] = []
    data = path.read_bytes()
    pos = 0
    index = -1  # header is record -1, events follow at their seq
    while pos < len(data):
        index += 1
        nl = data.find(b"\n", pos)
        if nl < 0:
            raise LogCorruptionError("truncated length prefix", index)
        try:
            length = int(data[pos:nl].decode("ascii"))
        except (UnicodeDecodeError, ValueError):
            raise LogCorruptionError("unreadable length prefix", index) from None
        start = nl + 1
        end = start + length
        if end + 1 > len(data) or data[end:end + 1] != b"\n":
            raise LogCorruptionError("record shorter than its declared length", index)
        try:
            obj = json.loads(data[start:end].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise LogCorruptionError("payload is not valid JSON", index) from None
        if not isinstance(obj, dict):
            raise LogCorruptionError("payload is not an object", index)
        records.append(obj)
        pos = end + 1
    return records


@dataclass
class Corpus:
    meta: DatasetMeta
    sentences: list[Sentence]
    gold: list[Extraction]
    sentence_by_id: dict[str, Sentence] = field(default_factory=dict)

    def __post_init__(self):
        self.sentence_by_id = {s.id: s for s in self.sentences}


class Store:
    """Materialized state over an event log; one writer, many readers."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.RLock()
        self.corpora: dict[str, Corpus] = {}
        self.runs: dict[tuple[str, str], SystemRun] = {}  # (dataset, system) -> run
        self.judgments: dict[tuple, Judgment] = {}  # (judge, kind, target, system) -> latest
        self.annotations: dict[str, tuple[str, Extraction]] = {}  # id -> (dataset, tuple)
        self._next_seq = 0
        if self.path.exists() and self.path.stat().st_size > 0:
            self._replay()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "ab") as fh:
                fh.write(_frame(_HEADER))
                fh.flush()
                os.fsync(fh.fileno())

    # ------------------------------------------------------------- replay

    def _replay(self) -> None:
        records = read_log(self.path)
        if not records or records[0].get("format") != _HEADER["format"]:
            raise LogCorruptionError("missing or foreign header record")
        if records[0].get("version") != _HEADER["version"]:
            raise LogCorruptionError(f"unsupported log version {records[0].get('version')!r}")
        for i, obj in enumerate(records[1:]):
            try:
                event = StoreEvent(
                    seq=int(obj["seq"]),
                    kind=EventKind(obj["kind"]),
                    payload=obj["payload"],
                    timestamp=float(obj["timestamp"]),
                )
            except (KeyError, ValueError, TypeError):
                raise LogCorruptionError("event record malformed", i) from None
            if event.seq != i:
                raise LogCorruptionError(f"expected sequence {i}, found {event.seq}", i)
            try:
                self._check(event)
            except Exception as exc:
                raise LogCorruptionError(f"event does not apply: {exc}", i) from None
            self._mutate(event)
            self._next_seq = event.seq + 1

    # ------------------------------------------------------------- append

    def _append(self, kind: EventKind, payload: dict) -> StoreEvent:
        with self._lock:
            event = StoreEvent(
                seq=self._next_seq, kind=kind, payload=payload, timestamp=time.time()
            )
            self._check(event)
            with open(self.path, "ab") as fh:
                fh.write(_frame(event.to_obj()))
                fh.flush()
                os.fsync(fh.fileno())
            self._mutate(event)
            self._next_seq += 1
            return event

    # ------------------------------------------------- validation + fold

    def _check(self, event: StoreEvent) -> None:
        p = event.payload
        if event.kind is EventKind.CORPUS_IMPORTED:
            name = p["meta"]["name"]
            if not p.get("replace") and name in self.corpora:
                raise DuplicateError(f"dataset {name!r} already imported (use replace)")
            if p.get("replace") and name not in self.corpora:
                raise UnknownIdError(f"cannot replace unknown dataset {name!r}")
            _corpus_from_payload(p)  # validates records and spans
        elif event.kind is EventKind.RUN_IMPORTED:
            dataset = p["dataset"]
            corpus = self.corpora.get(dataset)
            if corpus is None:
                raise UnknownIdError(f"run references unknown dataset {dataset!r}")
            if not p.get("replace") and (dataset, p["system"]) in self.runs:
                raise DuplicateError(
                    f"run for {p['system']!r} on {dataset!r} already imported (use replace)"
                )
            _run_from_payload(p, corpus)
        elif event.kind is EventKind.JUDGMENT_RECORDED:
            judgment = judgment_from_obj(p)
            validate_judgment(judgment)
            self._check_judgment_target(judgment)
        elif event.kind is EventKind.ANNOTATION_CREATED:
            self._annotation_from_payload(p)
        elif event.kind is EventKind.ANNOTATION_UPDATED:
            if p["id"] not in self.annotations:
                raise UnknownIdError(f"cannot update unknown annotation {p['id']!r}")
            self._annotation_from_payload(p)
        elif event.kind is EventKind.ANNOTATION_DELETED:
            if p["id"] not in self.annotations:
                raise UnknownIdError(f"cannot delete unknown annotation {p['id']!r}")

    def _check_judgment_target(self, judgment: Judgment) -> None:
        if judgment.target_kind == "extraction":
            for run in self.runs.values():
                if any(t.id == judgment.target_id for t in run.extractions):
                    return
            raise UnknownIdError(f"judgment targets unknown extraction {judgment.target_id!r}")
        dataset = None
        for name, corpus in self.corpora.items():
            if any(g.id == judgment.target_id for g in corpus.gold):
                dataset = name
                break
        if dataset is None and judgment.target_id in self.annotations:
            dataset = self.annotations[judgment.target_id][0]
        if dataset is None:
            raise UnknownIdError(f"judgment targets unknown gold tuple {judgment.target_id!r}")
        if (dataset, judgment.system) not in self.runs:
            raise UnknownIdError(
                f"no run of system {judgment.system!r} on dataset {dataset!r}"
            )

    def _mutate(self, event: StoreEvent) -> None:
        p = event.payload
        if event.kind is EventKind.CORPUS_IMPORTED:
            corpus = _corpus_from_payload(p)
            name = corpus.meta.name
            if p.get("replace"):
                self._drop_corpus_dependents(name)
            self.corpora[name] = corpus
        elif event.kind is EventKind.RUN_IMPORTED:
            run = _run_from_payload(p, self.corpora[p["dataset"]])
            self.runs[(run.dataset_name, run.system_name)] = run
        elif event.kind is EventKind.JUDGMENT_RECORDED:
            judgment = judgment_from_obj(p)
            key = (judgment.judge_id, judgment.target_kind, judgment.target_id, judgment.system)
            self.judgments[key] = judgment
        elif event.kind is EventKind.ANNOTATION_CREATED or event.kind is EventKind.ANNOTATION_UPDATED:
            dataset, annotation = self._annotation_from_payload(p)
            self.annotations[annotation.id] = (dataset, annotation)
        elif event.kind is EventKind.ANNOTATION_DELETED:
            del self.annotations[p["id"]]

    def _drop_corpus_dependents(self, dataset: str) -> None:
        self.runs = {k: v for k, v in self.runs.items() if k[0] != dataset}
        self.annotations = {
            aid: (ds, t) for aid, (ds, t) in self.annotations.items() if ds != dataset
        }
        keep_targets = {t.id for run in self.runs.values() for t in run.extractions}
        keep_targets |= {
            g.id for name, c in self.corpora.items() if name != dataset for g in c.gold
        }
        keep_targets |= set(self.annotations)
        self.judgments = {
            k: j for k, j in self.judgments.items() if j.target_id in keep_targets
        }

    def _annotation_from_payload(self, p: dict) -> tuple[str, Extraction]:
        dataset = p["dataset"]
        corpus = self.corpora.get(dataset)
        if corpus is None:
            raise UnknownIdError(f"annotation references unknown dataset {dataset!r}")
        sentence = corpus.sentence_by_id.get(p["sent_id"])
        if sentence is None:
            raise UnknownIdError(
                f"annotation references unknown sentence {p['sent_id']!r} in {dataset!r}"
            )
        predicate = _span_from_offsets(sentence, p["predicate"])
        args = tuple(_span_from_offsets(sentence, a) for a in p["args"])
        return dataset, Extraction(
            id=p["id"],
            sentence_id=sentence.id,
            predicate=predicate,
            arguments=args,
            system=None,
            provenance="manual",
        )

    # ------------------------------------------------------------ commands

    def import_corpus(self, corpus: ParsedCorpus, replace: bool = False) -> StoreEvent:
        payload = {
            "meta": _meta_to_obj(corpus.meta),
            "records": _corpus_records(corpus.sentences, corpus.tuples),
        }
        if replace:
            payload["replace"] = True
        return self._append(EventKind.CORPUS_IMPORTED, payload)

    def import_run(self, run: SystemRun, replace: bool = False) -> StoreEvent:
        corpus = self.corpora.get(run.dataset_name)
        if corpus is None:
            raise UnknownIdError(f"run references unknown dataset {run.dataset_name!r}")
        payload = {
            "system": run.system_name,
            "dataset": run.dataset_name,
            "records": _run_records(run, corpus),
        }
        if replace:
            payload["replace"] = True
        return self._append(EventKind.RUN_IMPORTED, payload)

    def record_judgment(
        self,
        target_kind: str,
        target_id: str,
        judge_id: str,
        correct: bool,
        labels: Iterable[tuple[str, ErrorClass]] = (),
        system: str | None = None,
        comment: str | None = None,
    ) -> Judgment:
        with self._lock:
            if target_kind == "extraction" and system is None:
                system = self._system_of_extraction(target_id)
            judgment = Judgment(
                id=f"j{self._next_seq}",
                target_kind=target_kind,
                target_id=target_id,
                judge_id=judge_id,
                correct=correct,
                labels=frozenset(labels),
                system=system,
                comment=comment,
                timestamp=time.time(),
            )
            self._append(EventKind.JUDGMENT_RECORDED, judgment_to_obj(judgment))
            return judgment

    def _system_of_extraction(self, target_id: str) -> str | None:
        for (_, system), run in self.runs.items():
            if any(t.id == target_id for t in run.extractions):
                return system
        return None

    def create_annotation(
        self, dataset: str, sent_id: str, predicate: tuple[int, int], args: Sequence[tuple[int, int]]
    ) -> Extraction:
        with self._lock:
            payload = {
                "id": f"{dataset}:{sent_id}:m{self._next_seq}",
                "dataset": dataset,
                "sent_id": sent_id,
                "predicate": list(predicate),
                "args": [list(a) for a in args],
            }
            self._append(EventKind.ANNOTATION_CREATED, payload)
            return self.annotations[payload["id"]][1]

    def update_annotation(
        self, annotation_id: str, predicate: tuple[int, int], args: Sequence[tuple[int, int]]
    ) -> Extraction:
        with self._lock:
            if annotation_id not in self.annotations:
                raise UnknownIdError(f"cannot update unknown annotation {annotation_id!r}")
            dataset, existing = self.annotations[annotation_id]
            payload = {
                "id": annotation_id,
                "dataset": dataset,
                "sent_id": existing.sentence_id,
                "predicate": list(predicate),
                "args": [list(a) for a in args],
            }
            self._append(EventKind.ANNOTATION_UPDATED, payload)
            return self.annotations[annotation_id][1]

    def delete_annotation(self, annotation_id: str) -> None:
        self._append(EventKind.ANNOTATION_DELETED, {"id": annotation_id})

    # ------------------------------------------------------------- queries
    #
    # Readers take the writer lock only long enough to copy out what they
    # iterate; the copied values are immutable, so callers never observe a
    # half-applied mutation from a concurrent append.

    def datasets(self) -> list[DatasetMeta]:
        with self._lock:
            return sorted((c.meta for c in self.corpora.values()), key=lambda m: m.name)

    def corpus(self, name: str) -> Corpus:
        corpus = self.corpora.get(name)
        if corpus is None:
            raise UnknownIdError(f"unknown dataset {name!r}")
        return corpus

    def gold_tuples(self, dataset: str) -> list[Extraction]:
        """Imported gold plus manually added annotations, in stable order."""
        corpus = self.corpus(dataset)
        with self._lock:
            manual = [t for ds, t in self.annotations.values() if ds == dataset]
        return corpus.gold + sorted(manual, key=lambda t: t.id)

    def runs_items(self) -> list[tuple[tuple[str, str], SystemRun]]:
        with self._lock:
            return sorted(self.runs.items())

    def runs_for(self, dataset: str) -> list[SystemRun]:
        return [run for (ds, _), run in self.runs_items() if ds == dataset]

    def run(self, dataset: str, system: str) -> SystemRun:
        run = self.runs.get((dataset, system))
        if run is None:
            raise UnknownIdError(f"no run of system {system!r} on dataset {dataset!r}")
        return run

    def judgments_list(self) -> list[Judgment]:
        """Latest judgment per (judge, target, system), in recording order."""
        with self._lock:
            return list(self.judgments.values())

    def digest(self) -> str:
        """Stable hash of the materialized state, for replay comparisons."""
        with self._lock:
            state = {
                "corpora": {
                    name: {
                        "meta": _meta_to_obj(c.meta),
                        "records": _corpus_records(c.sentences, c.gold),
                    }
                    for name, c in sorted(self.corpora.items())
                },
                "runs": {
                    f"{ds}/{system}": _run_records(run, self.corpora[ds])
                    for (ds, system), run in sorted(self.runs.items())
                },
                "judgments": [judgment_to_obj(j) for j in self.judgments.values()],
                "annotations": {
                    aid: {"dataset": ds, "tuple": tuple_to_obj(t), "sent_id": t.sentence_id}
                    for aid, (ds, t) in sorted(self.annotations.items())
                },
            }
        blob = json.dumps(state, ensure_ascii=False, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


# -------------------------------------------------- payload (de)serializers


def _meta_to_obj(meta: DatasetMeta) -> dict:
    return {
        "name": meta.name,
        "kind": meta.kind,
        "domain": meta.domain,
        "sentence_count": meta.sentence_count,
        "tuple_count": meta.tuple_count,
    }


def _corpus_records(sentences: Sequence[Sentence], tuples: Sequence[Extraction]) -> list[dict]:
    per_sentence: dict[str, list[Extraction]] = {s.id: [] for s in sentences}
    for t in tuples:
        per_sentence[t.sentence_id].append(t)
    return [sentence_to_record(s, per_sentence[s.id]) for s in sentences]


def _run_records(run: SystemRun, corpus: Corpus) -> list[dict]:
    per_sentence: dict[str, list[Extraction]] = {}
    for t in run.extractions:
        per_sentence.setdefault(t.sentence_id, []).append(t)
    return [
        sentence_to_record(corpus.sentence_by_id[sid], ts)
        for sid, ts in sorted(per_sentence.items())
    ]


def _corpus_from_payload(p: dict) -> Corpus:
    meta_obj = p["meta"]
    meta = DatasetMeta(
        name=meta_obj["name"],
        kind=meta_obj["kind"],
        domain=meta_obj.get("domain", ""),
        sentence_count=meta_obj["sentence_count"],
        tuple_count=meta_obj["tuple_count"],
    )
    sentences: list[Sentence] = []
    tuples: list[Extraction] = []
    for i, record in enumerate(p["records"]):
        sentence, sent_tuples = parse_sentence_record(
            record, i + 1, tuple_id=lambda sid, k: f"{meta.name}:{sid}:g{k}", system=None
        )
        sentences.append(sentence)
        tuples.extend(sent_tuples)
    if len(sentences) != meta.sentence_count or len(tuples) != meta.tuple_count:
        raise ValueError(
            f"corpus {meta.name!r} payload counts disagree with its metadata "
            f"({len(sentences)} sentences, {len(tuples)} tuples)"
        )
    return Corpus(meta=meta, sentences=sentences, gold=tuples)


def _run_from_payload(p: dict, corpus: Corpus) -> SystemRun:
    system = p["system"]
    extractions: list[Extraction] = []
    for i, record in enumerate(p["records"]):
        sent_id = record.get("sent_id")
        known = corpus.sentence_by_id.get(sent_id)
        if known is None:
            raise UnknownIdError(
                f"run references unknown sentence {sent_id!r} in {corpus.meta.name!r}"
            )
        if record.get("text") != known.text:
            raise ValueError(f"run text for sentence {sent_id!r} differs from the corpus")
        _, sent_tuples = parse_sentence_record(
            record,
            i + 1,
            tuple_id=lambda sid, k: f"{system}@{corpus.meta.name}:{sid}:e{k}",
            system=system,
        )
        extractions.extend(sent_tuples)
    return SystemRun(
        system_name=system, dataset_name=corpus.meta.name, extractions=tuple(extractions)
    )


def _span_from_offsets(sentence: Sentence, pair: Sequence[int]) -> Span:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise SpanError(f"expected [start, end], got {pair!r}")
    return make_span(sentence, int(pair[0]), int(pair[1]))


def judgment_to_obj(j: Judgment) -> dict:
    return {
        "id": j.id,
        "target_kind": j.target_kind,
        "target_id": j.target_id,
        "judge_id": j.judge_id,
        "correct": j.correct,
        "labels": sorted([part, cls.value] for part, cls in j.labels),
        "system": j.system,
        "comment": j.comment,
        "timestamp": j.timestamp,
    }


def judgment_from_obj(obj: dict) -> Judgment:
    try:
        labels = frozenset((part, ErrorClass(cls)) for part, cls in obj.get("labels", []))
    except ValueError as exc:
        raise JudgmentRuleError(f"unknown error class in labels: {exc}") from None
    return Judgment(
        id=obj["id"],
        target_kind=obj["target_kind"],
        target_id=obj["target_id"],
        judge_id=obj["judge_id"],
        correct=bool(obj["correct"]),
        labels=labels,
        system=obj.get("system"),
        comment=obj.get("comment"),
        timestamp=float(obj.get("timestamp", 0.0)),
    )
