"""Reads and writes the unified corpus format.

One UTF-8 JSON object per line; each line is one sentence:

    {"doc_id": str, "sent_idx": int, "sent_id": str, "text": str,
     "tuples": [{"predicate": {"start": int, "end": int, "surface": str,
                               "synthetic"?: bool},
                 "args": [{"start": int, "end": int, "surface": str}],
                 "confidence"?: number}]}

Run files use the same record grammar but start with a header line
``{"system": str, "dataset": str}``. Offsets count Unicode scalar values.
Sentence text is never touched on import: noisy sources (HTML character
encodings, headline fragments, unfinished sentences) are legal content and
round-trip verbatim. See docs/format.md for the full grammar.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import IO, Callable, Iterable, Sequence

from .errors import DuplicateError, FormatError, UnknownIdError
from .model import (
    DatasetMeta,
    Extraction,
    Sentence,
    Span,
    SystemRun,
    check_span,
    make_span,
    synthetic_span,
)


@dataclass(frozen=True)
class ParsedCorpus:
    meta: DatasetMeta
    sentences: tuple[Sentence, ...]
    tuples: tuple[Extraction, ...]


@dataclass(frozen=True)
class Violation:
    kind: str
    ref: str
    message: str


def _lines(data: bytes | str | IO) -> Iterable[str]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if isinstance(data, str):
        return io.StringIO(data)
    if isinstance(data, io.TextIOBase):
        return data
    return io.TextIOWrapper(data, encoding="utf-8")


def _expect(obj: dict, field: str, kind: type, line: int):
    if field not in obj:
        raise FormatError(f"missing field {field!r}", line)
    value = obj[field]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise FormatError(f"field {field!r} must be {kind.__name__}, got {value!r}", line)
    return value


def _parse_span_obj(obj, sentence: Sentence, line: int, what: str) -> Span:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be an object, got {obj!r}", line)
    start = _expect(obj, "start", int, line)
    end = _expect(obj, "end", int, line)
    surface = _expect(obj, "surface", str, line)
    if obj.get("synthetic"):
        if (start, end) != (0, 0):
            raise FormatError(
                f"{what}: synthetic spans must be anchored at [0, 0), got [{start}, {end})", line
            )
        if not surface:
            raise FormatError(f"{what}: synthetic span needs a non-empty surface", line)
        return synthetic_span(sentence.id, surface)
    if not (0 <= start < end <= len(sentence.text)):
        raise FormatError(
            f"{what}: offsets [{start}, {end}) out of bounds in sentence {sentence.id!r} "
            f"(length {len(sentence.text)})",
            line,
        )
    span = make_span(sentence, start, end)
    if span.surface != surface:
        raise FormatError(
            f"{what}: surface {surface!r} does not match text slice {span.surface!r} "
            f"in sentence {sentence.id!r}",
            line,
        )
    return span


def _parse_record(raw: str, line: int) -> dict:
    try:
        record = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON ({exc.msg})", line) from exc
    if not isinstance(record, dict):
        raise FormatError(f"record must be a JSON object, got {type(record).__name__}", line)
    return record


def parse_sentence_record(
    record: dict, line: int, tuple_id: Callable[[str, int], str], system: str | None
) -> tuple[Sentence, list[Extraction]]:
    """Turn one unified record into a sentence plus its tuples.

    ``tuple_id`` maps (sent_id, index within sentence) to the tuple id;
    ``system`` is None for gold records.
    """
    doc_id = _expect(record, "doc_id", str, line)
    sent_idx = _expect(record, "sent_idx", int, line)
    sent_id = _expect(record, "sent_id", str, line)
    text = _expect(record, "text", str, line)
    if not text:
        raise FormatError(f"sentence {sent_id!r} has empty text", line)
    sentence = Sentence(id=sent_id, document_id=doc_id, index=sent_idx, text=text)
    raw_tuples = _expect(record, "tuples", list, line)
    tuples: list[Extraction] = []
    for i, raw in enumerate(raw_tuples):
        if not isinstance(raw, dict):
            raise FormatError(f"tuple {i} must be an object", line)
        predicate = _parse_span_obj(raw.get("predicate"), sentence, line, f"tuple {i} predicate")
        raw_args = raw.get("args")
        if not isinstance(raw_args, list):
            raise FormatError(f"tuple {i} field 'args' must be an array", line)
        args = tuple(
            _parse_span_obj(a, sentence, line, f"tuple {i} argument {k}")
            for k, a in enumerate(raw_args)
        )
        confidence = raw.get("confidence")
        if confidence is not None:
            if isinstance(confidence, bool) or not isinstance(confidence, (int, float)):
                raise FormatError(f"tuple {i} confidence must be a number", line)
            if not (0.0 <= confidence <= 1.0):
                raise FormatError(f"tuple {i} confidence {confidence} outside [0, 1]", line)
            confidence = float(confidence)
        tuples.append(
            Extraction(
                id=tuple_id(sent_id, i),
                sentence_id=sent_id,
                predicate=predicate,
                arguments=args,
                system=system,
                confidence=confidence,
            )
        )
    return sentence, tuples


def infer_kind(tuples: Sequence[Extraction]) -> str:
    return "binary" if all(t.arity == 2 for t in tuples) else "nary"


def parse_gold(data: bytes | str | IO, dataset_name: str, domain: str = "") -> ParsedCorpus:
    """Parse a gold corpus; counts and the binary/n-ary kind come from content."""
    if ":" in dataset_name:
        raise FormatError(f"dataset name {dataset_name!r} must not contain ':'")
    sentences: list[Sentence] = []
    tuples: list[Extraction] = []
    seen: set[str] = set()
    positions: set[tuple[str, int]] = set()
    for line_no, raw in enumerate(_lines(data), start=1):
        if not raw.strip():
            continue
        record = _parse_record(raw, line_no)
        sentence, sent_tuples = parse_sentence_record(
            record,
            line_no,
            tuple_id=lambda sid, i: f"{dataset_name}:{sid}:g{i}",
            system=None,
        )
        if sentence.id in seen:
            raise FormatError(f"duplicate sentence id {sentence.id!r}", line_no)
        if (sentence.document_id, sentence.index) in positions:
            raise FormatError(
                f"duplicate position (document {sentence.document_id!r}, index {sentence.index})",
                line_no,
            )
        seen.add(sentence.id)
        positions.add((sentence.document_id, sentence.index))
        sentences.append(sentence)
        tuples.extend(sent_tuples)
    meta = DatasetMeta(
        name=dataset_name,
        kind=infer_kind(tuples),
        domain=domain,
        sentence_count=len(sentences),
        tuple_count=len(tuples),
    )
    return ParsedCorpus(meta=meta, sentences=tuple(sentences), tuples=tuple(tuples))


def parse_run(
    data: bytes | str | IO,
    dataset: DatasetMeta,
    sentences: Sequence[Sentence],
    system_name: str | None = None,
) -> SystemRun:
    """Parse a run file against an already imported dataset.

    The header line declares the system and dataset; ``system_name`` is an
    optional cross-check. Records must reference known sentences and repeat
    their text verbatim.
    """
    by_id = {s.id: s for s in sentences}
    lines = iter(enumerate(_lines(data), start=1))
    header = None
    for line_no, raw in lines:
        if raw.strip():
            header = (_parse_record(raw, line_no), line_no)
            break
    if header is None:
        raise FormatError("run file is empty; expected a header line")
    head, head_line = header
    system = _expect(head, "system", str, head_line)
    declared = _expect(head, "dataset", str, head_line)
    if system_name is not None and system != system_name:
        raise FormatError(
            f"header declares system {system!r}, expected {system_name!r}", head_line
        )
    if declared != dataset.name:
        raise FormatError(
            f"header declares dataset {declared!r}, expected {dataset.name!r}", head_line
        )

    extractions: list[Extraction] = []
    per_sentence: dict[str, int] = {}
    for line_no, raw in lines:
        if not raw.strip():
            continue
        record = _parse_record(raw, line_no)
        sent_id = _expect(record, "sent_id", str, line_no)
        known = by_id.get(sent_id)
        if known is None:
            raise UnknownIdError(
                f"line {line_no}: sentence id {sent_id!r} not in dataset {dataset.name!r}"
            )
        if record.get("text") != known.text:
            raise FormatError(
                f"text for sentence {sent_id!r} differs from the imported corpus", line_no
            )
        base = per_sentence.get(sent_id, 0)
        _, sent_tuples = parse_sentence_record(
            record,
            line_no,
            tuple_id=lambda sid, i: f"{system}@{dataset.name}:{sid}:e{base + i}",
            system=system,
        )
        per_sentence[sent_id] = base + len(sent_tuples)
        extractions.extend(sent_tuples)
    return SystemRun(system_name=system, dataset_name=dataset.name, extractions=tuple(extractions))


def validate_corpus(
    sentences: Sequence[Sentence], tuples: Sequence[Extraction]
) -> list[Violation]:
    """Re-check every span and reference; violations are data, not failures."""
    violations: list[Violation] = []
    by_id: dict[str, Sentence] = {}
    keys: set[tuple[str, int]] = set()
    for s in sentences:
        if s.id in by_id:
            violations.append(Violation("duplicate_sentence", s.id, "sentence id seen twice"))
        by_id[s.id] = s
        if not s.text:
            violations.append(Violation("empty_text", s.id, "sentence text is empty"))
        if (s.document_id, s.index) in keys:
            violations.append(
                Violation(
                    "duplicate_position",
                    s.id,
                    f"(document {s.document_id!r}, index {s.index}) seen twice",
                )
            )
        keys.add((s.document_id, s.index))
    for t in tuples:
        sentence = by_id.get(t.sentence_id)
        if sentence is None:
            violations.append(
                Violation("unknown_sentence", t.id, f"references sentence {t.sentence_id!r}")
            )
            continue
        for what, span in [("predicate", t.predicate)] + [
            (f"argument {i}", a) for i, a in enumerate(t.arguments)
        ]:
            if span.sentence_id != t.sentence_id:
                violations.append(
                    Violation("cross_sentence_span", t.id, f"{what} belongs to another sentence")
                )
                continue
            problem = check_span(span, sentence.text)
            if problem:
                violations.append(Violation("bad_span", t.id, f"{what}: {problem}"))
    return violations


def span_to_obj(span: Span) -> dict:
    obj = {"start": span.start, "end": span.end, "surface": span.surface}
    if span.is_synthetic:
        obj["synthetic"] = True
    return obj


def tuple_to_obj(t: Extraction) -> dict:
    obj = {
        "predicate": span_to_obj(t.predicate),
        "args": [span_to_obj(a) for a in t.arguments],
    }
    if t.confidence is not None:
        obj["confidence"] = t.confidence
    return obj


def sentence_to_record(sentence: Sentence, tuples: Sequence[Extraction]) -> dict:
    return {
        "doc_id": sentence.document_id,
        "sent_idx": sentence.index,
        "sent_id": sentence.id,
        "text": sentence.text,
        "tuples": [tuple_to_obj(t) for t in tuples],
    }


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False)


def serialize_gold(sentences: Sequence[Sentence], tuples: Sequence[Extraction]) -> str:
    """Inverse of parse_gold; sentence and tuple order is preserved."""
    per_sentence: dict[str, list[Extraction]] = {s.id: [] for s in sentences}
    for t in tuples:
        per_sentence[t.sentence_id].append(t)
    lines = [_dump(sentence_to_record(s, per_sentence[s.id])) for s in sentences]
    return "".join(line + "\n" for line in lines)


def serialize_run(run: SystemRun, sentences: Sequence[Sentence]) -> str:
    """Inverse of parse_run; only sentences with extractions are written."""
    per_sentence: dict[str, list[Extraction]] = {}
    for t in run.extractions:
        per_sentence.setdefault(t.sentence_id, []).append(t)
    lines = [_dump({"system": run.system_name, "dataset": run.dataset_name})]
    for s in sentences:
        if s.id in per_sentence:
            lines.append(_dump(sentence_to_record(s, per_sentence[s.id])))
    return "".join(line + "\n" for line in lines)
