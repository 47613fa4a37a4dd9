"""Value types shared by every other module.

All types are immutable; they can be handed to concurrent workers without
coordination. Offsets are character-based (Unicode scalar values, not bytes)
and sentence-local.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import JudgmentRuleError, SpanError

GOLD = "gold"

#: Assignment search in strict tuple matching is exhaustive; reject absurd arities.
MAX_ARITY = 10


class MatchStrategy(str, Enum):
    EQUAL = "equal"
    CONTAINMENT = "containment"
    RELAXED_CONTAINMENT = "relaxed"


class ErrorClass(str, Enum):
    WRONG_BOUNDARIES = "wrong_boundaries"
    REDUNDANT = "redundant"
    UNINFORMATIVE = "uninformative"
    MISSING = "missing"
    WRONG = "wrong"
    OUT_OF_SCOPE = "out_of_scope"


#: Label parts: "predicate", "whole", or "argument:<i>" with i >= 0.
_PART_RE = re.compile(r"^(predicate|whole|argument:\d+)$")


def valid_part(part: str) -> bool:
    return bool(_PART_RE.match(part))


@dataclass(frozen=True)
class Sentence:
    id: str
    document_id: str
    index: int
    text: str


@dataclass(frozen=True)
class Span:
    """A character interval [start, end) within one sentence.

    ``surface`` caches the covered substring. Synthetic spans carry text that
    does not occur contiguously in the sentence (e.g. predicates the producing
    annotation invented); they are anchored at [0, 0) and compared by surface
    string only.
    """

    sentence_id: str
    start: int
    end: int
    surface: str
    is_synthetic: bool = False

    def key(self) -> tuple[int, int, str]:
        return (self.start, self.end, self.surface)


def make_span(sentence: Sentence, start: int, end: int) -> Span:
    """Build a span over ``sentence``, caching the surface text.

    Rejects inverted or out-of-bounds offsets, echoing the offending values.
    """
    if not (0 <= start < end <= len(sentence.text)):
        raise SpanError(
            f"invalid offsets [{start}, {end}) for sentence {sentence.id!r} "
            f"of length {len(sentence.text)}"
        )
    return Span(sentence.id, start, end, sentence.text[start:end])


def synthetic_span(sentence_id: str, surface: str) -> Span:
    """Build a synthetic span for text that has no contiguous anchor."""
    if not surface:
        raise SpanError("synthetic span needs a non-empty surface")
    return Span(sentence_id, 0, 0, surface, is_synthetic=True)


def check_span(span: Span, text: str) -> str | None:
    """Re-check a span against its sentence text; returns a problem or None."""
    if span.is_synthetic:
        if span.start != 0 or span.end != 0:
            return f"synthetic span must be anchored at [0, 0), got [{span.start}, {span.end})"
        if not span.surface:
            return "synthetic span has an empty surface"
        return None
    if not (0 <= span.start < span.end <= len(text)):
        return f"offsets [{span.start}, {span.end}) out of bounds for text of length {len(text)}"
    if text[span.start:span.end] != span.surface:
        return (
            f"surface cache {span.surface!r} does not equal text slice "
            f"{text[span.start:span.end]!r} at [{span.start}, {span.end})"
        )
    return None


@dataclass(frozen=True)
class Extraction:
    """One predicate span plus n ordered argument spans from a single sentence.

    Covers both gold annotations (``system is None``) and system output.
    Argument order is preserved as produced; matching decides whether it
    matters. ``provenance`` distinguishes imported gold from annotations
    created by hand in the editor.
    """

    id: str
    sentence_id: str
    predicate: Span
    arguments: tuple[Span, ...]
    system: str | None = None
    confidence: float | None = None
    provenance: str = "imported"

    @property
    def is_gold(self) -> bool:
        return self.system is None

    @property
    def source(self) -> str:
        return GOLD if self.system is None else self.system

    @property
    def arity(self) -> int:
        return len(self.arguments)


def arity(t: Extraction) -> int:
    """Number of arguments; 2 means binary, anything else n-ary."""
    return len(t.arguments)


@dataclass(frozen=True)
class DatasetMeta:
    name: str
    kind: str  # "binary" when every gold tuple has exactly two arguments, else "nary"
    domain: str
    sentence_count: int
    tuple_count: int


@dataclass(frozen=True)
class SystemRun:
    system_name: str
    dataset_name: str
    extractions: tuple[Extraction, ...]


@dataclass(frozen=True)
class Judgment:
    """One judge's verdict on one extraction (or one missed gold tuple).

    ``target_kind`` is "extraction" for system output and "gold" for missed
    gold tuples. ``labels`` is a set of (part, error class) pairs; parts are
    "predicate", "whole", or "argument:<i>". ``system`` names the judged
    system; it is required for gold targets (a miss is a miss *by* a system)
    and inferred from the extraction otherwise.
    """

    id: str
    target_kind: str
    target_id: str
    judge_id: str
    correct: bool
    labels: frozenset[tuple[str, ErrorClass]] = frozenset()
    system: str | None = None
    comment: str | None = None
    timestamp: float = 0.0


def validate_judgment(j: Judgment) -> None:
    """Enforce the labeling invariants; raises JudgmentRuleError.

    - an out-of-scope verdict excludes every other label: the label set must
      be exactly {("whole", OUT_OF_SCOPE)};
    - "missing" may only target a gold tuple, all other classes only a
      predicted extraction, and the two cannot mix;
    - gold-targeted judgments must name the system that missed the tuple.
    """
    if j.target_kind not in ("extraction", "gold"):
        raise JudgmentRuleError(f"unknown target kind {j.target_kind!r}")
    for part, cls in j.labels:
        if not valid_part(part):
            raise JudgmentRuleError(f"invalid label part {part!r}")
        if not isinstance(cls, ErrorClass):
            raise JudgmentRuleError(f"invalid error class {cls!r}")
    classes = {cls for _, cls in j.labels}
    if ErrorClass.OUT_OF_SCOPE in classes:
        if j.labels != frozenset({("whole", ErrorClass.OUT_OF_SCOPE)}):
            raise JudgmentRuleError(
                "out_of_scope excludes all other labels; expected exactly "
                "{('whole', out_of_scope)}"
            )
        if j.target_kind != "extraction":
            raise JudgmentRuleError("out_of_scope only applies to predicted extractions")
    if ErrorClass.MISSING in classes:
        if j.target_kind != "gold":
            raise JudgmentRuleError("missing may only target a gold tuple")
        if classes != {ErrorClass.MISSING}:
            raise JudgmentRuleError("a gold-targeted judgment may only carry the missing class")
        if any(part != "whole" for part, _ in j.labels):
            raise JudgmentRuleError("missing applies to the whole tuple, not a part")
    elif j.target_kind == "gold" and j.labels:
        raise JudgmentRuleError("gold targets accept only the missing class")
    if j.target_kind == "gold" and not j.system:
        raise JudgmentRuleError("gold-targeted judgments must name the system that missed the tuple")


@dataclass(frozen=True)
class ScoreReport:
    """Micro-averaged counts and scores for one system x dataset x strategy."""

    system_name: str
    dataset_name: str
    strategy: MatchStrategy
    n_predicted: int
    n_gold: int
    n_matched: int
    precision: float
    recall: float
    f2: float


@dataclass(frozen=True)
class ErrorTally:
    """Per-class error counts for one judged run.

    ``counts`` maps every ErrorClass to a non-negative integer; one extraction
    may increment several classes but each class at most once. Missing counts
    come from gold-targeted judgments and are not part of ``n_predicted``.
    """

    system_name: str
    dataset_name: str
    counts: dict[ErrorClass, int] = field(default_factory=dict)
    n_predicted: int = 0
    n_correct: int = 0
