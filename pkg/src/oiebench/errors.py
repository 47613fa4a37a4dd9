"""Exception types shared across the package."""

from __future__ import annotations


class BenchError(Exception):
    """Base class for all errors raised by this package."""


class SpanError(BenchError, ValueError):
    """Offsets out of bounds, inverted, or inconsistent with the sentence text."""


class CrossSentenceError(BenchError, ValueError):
    """Spans or tuples from different sentences were compared."""


class ArityLimitError(BenchError, ValueError):
    """Tuple arity exceeds the assignment-search guard."""


class JudgmentRuleError(BenchError, ValueError):
    """A judgment violates a labeling invariant."""


class FormatError(BenchError, ValueError):
    """A corpus or run file is malformed.

    ``line`` is 1-based and points at the offending record when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownIdError(BenchError, KeyError):
    """A referenced sentence, tuple, dataset, or system does not exist."""

    def __init__(self, message: str):
        # KeyError repr-quotes its message; store it plainly.
        self.message = message
        super().__init__(message)

    def __str__(self) -> str:
        return self.message


class DuplicateError(BenchError, ValueError):
    """An id or name that must be unique was seen twice."""


class LogCorruptionError(BenchError, RuntimeError):
    """The event log cannot be replayed past a damaged record."""

    def __init__(self, message: str, sequence: int | None = None):
        self.sequence = sequence
        if sequence is not None:
            message = f"event {sequence}: {message}"
        super().__init__(message)
