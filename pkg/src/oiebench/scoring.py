"""Aggregates per-sentence alignments into scores and judgment tallies.

Scores are micro-averaged: tuple counts are summed over all sentences before
dividing, so a sentence with 140 extractions weighs 140 times as much as one
with a single extraction. Fractions are kept internally; exports format them
as percentages.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

from .errors import UnknownIdError
from .matching import align_tuples
from .model import (
    ErrorClass,
    ErrorTally,
    Extraction,
    Judgment,
    MatchStrategy,
    ScoreReport,
    SystemRun,
    validate_judgment,
)


def f_beta(p: float, r: float, beta: float = 2.0) -> float:
    """Weighted harmonic mean of precision and recall; beta > 1 favors recall.

    Returns 0 when both inputs are 0 (the denominator guard).
    """
    if not (0.0 <= p <= 1.0) or not (0.0 <= r <= 1.0):
        raise ValueError(f"precision and recall must lie in [0, 1], got p={p}, r={r}")
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    b2 = beta * beta
    denom = b2 * p + r
    if denom == 0:
        return 0.0
    return (1 + b2) * p * r / denom


def evaluate_run(
    run: SystemRun,
    gold: Sequence[Extraction],
    strategy: MatchStrategy,
    sentence_ids: Iterable[str] | None = None,
) -> ScoreReport:
    """Align per sentence, then micro-average into one report.

    ``sentence_ids``, when given, is the full id set of the dataset; run
    extractions referencing anything else are rejected with the offenders
    listed.
    """
    if sentence_ids is not None:
        known = set(sentence_ids)
        offenders = sorted({t.sentence_id for t in run.extractions} - known)
        if offenders:
            raise UnknownIdError(
                f"run {run.system_name!r} references unknown sentences: {', '.join(offenders)}"
            )
    by_sentence: dict[str, tuple[list[Extraction], list[Extraction]]] = defaultdict(
        lambda: ([], [])
    )
    for t in run.extractions:
        by_sentence[t.sentence_id][0].append(t)
    for g in gold:
        by_sentence[g.sentence_id][1].append(g)

    n_matched = 0
    for sid in sorted(by_sentence):
        preds, golds = by_sentence[sid]
        n_matched += len(align_tuples(preds, golds, strategy, sentence_id=sid).pairs)

    n_predicted = len(run.extractions)
    n_gold = len(gold)
    precision = n_matched / n_predicted if n_predicted else 0.0
    recall = n_matched / n_gold if n_gold else 0.0
    return ScoreReport(
        system_name=run.system_name,
        dataset_name=run.dataset_name,
        strategy=strategy,
        n_predicted=n_predicted,
        n_gold=n_gold,
        n_matched=n_matched,
        precision=precision,
        recall=recall,
        f2=f_beta(precision, recall, 2.0),
    )


def tally_errors(
    judgments: Iterable[Judgment],
    run: SystemRun,
    gold: Sequence[Extraction],
) -> ErrorTally:
    """Count error classes over the judged extractions of one run.

    Each (target, class) pair counts once, however many parts or judges
    flagged it. Gold-targeted judgments contribute to the missing count when
    they name this run's system; judgments for other systems' misses are
    ignored. Extractions flagged out of scope increment no other class (the
    label set already enforces exclusivity).
    """
    extraction_ids = {t.id for t in run.extractions}
    gold_ids = {g.id for g in gold}
    flagged: set[tuple[str, ErrorClass]] = set()
    missed: set[str] = set()
    correct_targets: set[str] = set()

    for j in judgments:
        validate_judgment(j)
        if j.target_kind == "extraction":
            if j.target_id not in extraction_ids:
                raise UnknownIdError(
                    f"judgment {j.id!r} references unknown extraction {j.target_id!r}"
                )
            for _, cls in j.labels:
                flagged.add((j.target_id, cls))
            if j.correct:
                correct_targets.add(j.target_id)
        else:
            if j.target_id not in gold_ids:
                raise UnknownIdError(
                    f"judgment {j.id!r} references unknown gold tuple {j.target_id!r}"
                )
            if j.system == run.system_name:
                missed.add(j.target_id)

    counts = {cls: 0 for cls in ErrorClass}
    for _, cls in flagged:
        counts[cls] += 1
    counts[ErrorClass.MISSING] = len(missed)
    return ErrorTally(
        system_name=run.system_name,
        dataset_name=run.dataset_name,
        counts=counts,
        n_predicted=len(run.extractions),
        n_correct=len(correct_targets),
    )


def detect_duplicates(tuples: Sequence[Extraction]) -> list[list[Extraction]]:
    """Group same-sentence tuples with an identical predicate span and an
    identical multiset of argument spans. Assists, never replaces, human
    redundancy labeling."""
    sentence_ids = {t.sentence_id for t in tuples}
    if len(sentence_ids) > 1:
        raise ValueError(f"tuples span multiple sentences: {sorted(sentence_ids)}")
    groups: dict[tuple, list[Extraction]] = defaultdict(list)
    for t in tuples:
        key = (t.predicate.key(), tuple(sorted(a.key() for a in t.arguments)))
        groups[key].append(t)
    result = [sorted(g, key=lambda t: t.id) for g in groups.values() if len(g) >= 2]
    result.sort(key=lambda g: g[0].id)
    return result
