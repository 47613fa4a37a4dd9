"""Benchmarking harness for open information extraction systems."""

from .matching import Alignment, align_tuples, span_matches, tuple_matches
from .model import (
    DatasetMeta,
    ErrorClass,
    ErrorTally,
    Extraction,
    Judgment,
    MatchStrategy,
    ScoreReport,
    Sentence,
    Span,
    SystemRun,
    arity,
    make_span,
)
from .scoring import detect_duplicates, evaluate_run, f_beta, tally_errors

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "DatasetMeta",
    "ErrorClass",
    "ErrorTally",
    "Extraction",
    "Judgment",
    "MatchStrategy",
    "ScoreReport",
    "Sentence",
    "Span",
    "SystemRun",
    "align_tuples",
    "arity",
    "detect_duplicates",
    "evaluate_run",
    "f_beta",
    "make_span",
    "span_matches",
    "tally_errors",
    "tuple_matches",
    "__version__",
]
