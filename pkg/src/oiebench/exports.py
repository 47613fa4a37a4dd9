"""Deterministic report formatting: CSV exports and chart series.

Scores leave this module as percentages with two decimals; the same strings
feed the CSV files, the CLI table, and the service responses, so every
surface shows identical bytes for identical state.
"""

from __future__ import annotations

from typing import Sequence

from .model import ErrorClass, ErrorTally, ScoreReport

#: Radar/bar axes: the five plotted error classes. Out-of-scope is excluded
#: by default because it does not indicate an error.
DEFAULT_CHART_AXES: tuple[ErrorClass, ...] = (
    ErrorClass.REDUNDANT,
    ErrorClass.UNINFORMATIVE,
    ErrorClass.WRONG_BOUNDARIES,
    ErrorClass.WRONG,
    ErrorClass.MISSING,
)

#: Row order of the error-tally export.
ERROR_CSV_ROWS: tuple[str, ...] = (
    "relations",
    "predicted",
    "correct",
    "redundant",
    "uninformative",
    "wrong_boundaries",
    "wrong",
    "out_of_scope",
    "missing",
)

SCORES_CSV_HEADER = "dataset,system,strategy,precision,recall,f2"


def pct(value: float) -> str:
    return f"{value * 100:.2f}"


def score_row(report: ScoreReport) -> str:
    return ",".join(
        [
            report.dataset_name,
            report.system_name,
            report.strategy.value,
            pct(report.precision),
            pct(report.recall),
            pct(report.f2),
        ]
    )


def scores_csv(reports: Sequence[ScoreReport]) -> str:
    ordered = sorted(reports, key=lambda r: (r.dataset_name, r.system_name, r.strategy.value))
    return "\n".join([SCORES_CSV_HEADER] + [score_row(r) for r in ordered]) + "\n"


def _tally_cell(tally: ErrorTally, gold_count: int, row: str) -> int:
    if row == "relations":
        return gold_count
    if row == "predicted":
        return tally.n_predicted
    if row == "correct":
        return tally.n_correct
    return tally.counts.get(ErrorClass(row), 0)


def errors_csv(tallies: Sequence[ErrorTally], gold_counts: dict[str, int]) -> str:
    """One column per (dataset, system), one row per count."""
    ordered = sorted(tallies, key=lambda t: (t.dataset_name, t.system_name))
    header = ["metric"] + [f"{t.dataset_name}/{t.system_name}" for t in ordered]
    lines = [",".join(header)]
    for row in ERROR_CSV_ROWS:
        cells = [row] + [
            str(_tally_cell(t, gold_counts.get(t.dataset_name, 0), row)) for t in ordered
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def report_to_obj(report: ScoreReport) -> dict:
    """Report record with both fractions and the exported percentage strings."""
    return {
        "dataset": report.dataset_name,
        "system": report.system_name,
        "strategy": report.strategy.value,
        "n_predicted": report.n_predicted,
        "n_gold": report.n_gold,
        "n_matched": report.n_matched,
        "precision": report.precision,
        "recall": report.recall,
        "f2": report.f2,
        "precision_pct": pct(report.precision),
        "recall_pct": pct(report.recall),
        "f2_pct": pct(report.f2),
    }


def chart_series(
    tallies: Sequence[ErrorTally],
    axes: Sequence[ErrorClass] = DEFAULT_CHART_AXES,
    crop_at: int | None = None,
    kind: str = "kiviat",
) -> dict:
    """Per-system error counts along the chart axes, summed over datasets.

    Values are never clamped here; ``crop_at`` is echoed so a client can crop
    the drawing while showing true values in tooltips.
    """
    per_system: dict[str, dict[ErrorClass, int]] = {}
    for tally in tallies:
        acc = per_system.setdefault(tally.system_name, {cls: 0 for cls in ErrorClass})
        for cls, n in tally.counts.items():
            acc[cls] += n
    series = [
        {"system": system, "counts": [per_system[system][cls] for cls in axes]}
        for system in sorted(per_system)
    ]
    return {
        "kind": kind,
        "axes": [cls.value for cls in axes],
        "series": series,
        "crop_at": crop_at,
    }
