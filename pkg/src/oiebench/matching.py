"""Span and tuple matching plus per-sentence alignment.

Three strategies grade how predicted boundaries may deviate from gold:

- ``equal``: identical span boundaries, identical arity.
- ``containment``: each gold span must lie fully inside the paired predicted
  span; arity must still agree.
- ``relaxed``: arity is ignored; the extraction counts as long as the
  predicate matches under containment and every gold argument is contained in
  at least one predicted argument.

Synthetic spans (text with no contiguous anchor in the sentence) are compared
by surface string only, under every strategy; loosening boundaries is
meaningless for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ArityLimitError, CrossSentenceError
from .model import Extraction, MatchStrategy, Span, MAX_ARITY

#: Above this |predicted| x |gold| product the tie-break refinement is skipped;
#: cardinality stays exact at every size.
_REFINE_LIMIT = 64


def span_matches(predicted: Span, gold: Span, strategy: MatchStrategy) -> bool:
    """True when the predicted span covers the gold span per the strategy."""
    if predicted.sentence_id != gold.sentence_id:
        raise CrossSentenceError(
            f"cannot compare spans of sentences {predicted.sentence_id!r} "
            f"and {gold.sentence_id!r}"
        )
    if predicted.is_synthetic or gold.is_synthetic:
        return predicted.surface == gold.surface
    if strategy is MatchStrategy.EQUAL:
        return predicted.start == gold.start and predicted.end == gold.end
    return predicted.start <= gold.start and gold.end <= predicted.end


def _require_same_sentence(predicted: Extraction, gold: Extraction) -> None:
    if predicted.sentence_id != gold.sentence_id:
        raise CrossSentenceError(
            f"cannot match tuples of sentences {predicted.sentence_id!r} "
            f"and {gold.sentence_id!r}"
        )


def _perfect_assignment_exists(adj: list[list[bool]]) -> bool:
    """True when the n x n compatibility matrix admits a perfect matching."""
    n = len(adj)
    match_of: list[int] = [-1] * n

    def augment(i: int, seen: list[bool]) -> bool:
        for j in range(n):
            if adj[i][j] and not seen[j]:
                seen[j] = True
                if match_of[j] < 0 or augment(match_of[j], seen):
                    match_of[j] = i
                    return True
        return False

    return all(augment(i, [False] * n) for i in range(n))


def tuple_matches_strict(predicted: Extraction, gold: Extraction, strategy: MatchStrategy) -> bool:
    """Predicate matches, arity agrees, and the arguments pair up one-to-one.

    Argument correspondence is order-insensitive: any one-to-one assignment of
    predicted to gold arguments where every pair matches will do.
    """
    _require_same_sentence(predicted, gold)
    if max(predicted.arity, gold.arity) > MAX_ARITY:
        raise ArityLimitError(
            f"arity {max(predicted.arity, gold.arity)} exceeds the assignment "
            f"search limit of {MAX_ARITY}"
        )
    if not span_matches(predicted.predicate, gold.predicate, strategy):
        return False
    if predicted.arity != gold.arity:
        return False
    adj = [
        [span_matches(p_arg, g_arg, strategy) for g_arg in gold.arguments]
        for p_arg in predicted.arguments
    ]
    return _perfect_assignment_exists(adj)


def tuple_matches_relaxed(predicted: Extraction, gold: Extraction) -> bool:
    """Arity-blind variant: predicate contains gold's, and every gold argument
    is contained in at least one predicted *argument* span (never the
    predicate span)."""
    _require_same_sentence(predicted, gold)
    if not span_matches(predicted.predicate, gold.predicate, MatchStrategy.CONTAINMENT):
        return False
    return all(
        any(span_matches(p_arg, g_arg, MatchStrategy.CONTAINMENT) for p_arg in predicted.arguments)
        for g_arg in gold.arguments
    )


def tuple_matches(predicted: Extraction, gold: Extraction, strategy: MatchStrategy) -> bool:
    if strategy is MatchStrategy.RELAXED_CONTAINMENT:
        return tuple_matches_relaxed(predicted, gold)
    return tuple_matches_strict(predicted, gold, strategy)


@dataclass(frozen=True)
class Alignment:
    """One-to-one pairing of predicted to gold tuples for one sentence.

    ``pairs`` holds (predicted id, gold id) and is maximal: no alternative
    one-to-one pairing under the same strategy matches more tuples. Unmatched
    gold tuples are the sentence's missing set.
    """

    sentence_id: str
    strategy: MatchStrategy
    pairs: tuple[tuple[str, str], ...]
    unmatched_predicted: tuple[str, ...]
    unmatched_gold: tuple[str, ...]


def _solve(cost: np.ndarray, allowed: np.ndarray) -> tuple[int, float, list[tuple[int, int]]]:
    """Maximum-cardinality, then minimum-cost assignment.

    Forbidden cells carry a cost larger than any achievable sum of real
    costs, so minimizing total cost first maximizes the number of allowed
    pairs used.
    """
    if cost.size == 0:
        return 0, 0.0, []
    rows, cols = linear_sum_assignment(cost)
    pairs = [(int(i), int(j)) for i, j in zip(rows, cols) if allowed[i, j]]
    total = float(sum(cost[i, j] for i, j in pairs))
    return len(pairs), total, pairs


def align_tuples(
    predicted: Sequence[Extraction],
    gold: Sequence[Extraction],
    strategy: MatchStrategy,
    sentence_id: str | None = None,
) -> Alignment:
    """Pair predicted tuples with gold tuples, maximizing the number of pairs.

    Ties between equal-cardinality pairings are broken by (1) the smallest sum
    of |predicted predicate start - gold predicate start| and (2) the
    lexicographically smallest (gold id, predicted id) pair sequence, so the
    result is deterministic regardless of input order. The lexicographic
    refinement is applied while |predicted| x |gold| <= 64; beyond that the
    assignment solver's deterministic answer over id-sorted inputs stands.
    """
    sentence_ids = {t.sentence_id for t in predicted} | {t.sentence_id for t in gold}
    if len(sentence_ids) > 1:
        raise CrossSentenceError(f"tuples span multiple sentences: {sorted(sentence_ids)}")
    if sentence_ids:
        inferred = next(iter(sentence_ids))
        if sentence_id is not None and sentence_id != inferred:
            raise CrossSentenceError(
                f"tuples belong to sentence {inferred!r}, not {sentence_id!r}"
            )
        sentence_id = inferred
    elif sentence_id is None:
        sentence_id = ""

    preds = sorted(predicted, key=lambda t: t.id)
    golds = sorted(gold, key=lambda t: t.id)
    if not preds or not golds:
        return Alignment(
            sentence_id=sentence_id,
            strategy=strategy,
            pairs=(),
            unmatched_predicted=tuple(t.id for t in preds),
            unmatched_gold=tuple(t.id for t in golds),
        )

    allowed = np.zeros((len(preds), len(golds)), dtype=bool)
    dist = np.zeros_like(allowed, dtype=np.float64)
    for i, p in enumerate(preds):
        for j, g in enumerate(golds):
            allowed[i, j] = tuple_matches(p, g, strategy)
            dist[i, j] = abs(p.predicate.start - g.predicate.start)
    big = float(dist[allowed].sum()) + 1.0 if allowed.any() else 1.0
    cost = np.where(allowed, dist, big)

    best_k, best_c, pairs = _solve(cost, allowed)

    if 0 < best_k and len(preds) * len(golds) <= _REFINE_LIMIT:
        pairs = _lexicographic_refine(cost, allowed, preds, golds, best_k, best_c)

    matched_p = {i for i, _ in pairs}
    matched_g = {j for _, j in pairs}
    id_pairs = sorted(
        ((preds[i].id, golds[j].id) for i, j in pairs), key=lambda pg: (pg[1], pg[0])
    )
    return Alignment(
        sentence_id=sentence_id,
        strategy=strategy,
        pairs=tuple(id_pairs),
        unmatched_predicted=tuple(p.id for i, p in enumerate(preds) if i not in matched_p),
        unmatched_gold=tuple(g.id for j, g in enumerate(golds) if j not in matched_g),
    )


def _lexicographic_refine(
    cost: np.ndarray,
    allowed: np.ndarray,
    preds: Sequence[Extraction],
    golds: Sequence[Extraction],
    best_k: int,
    best_c: float,
) -> list[tuple[int, int]]:
    """Among optimal pairings, fix pairs greedily in (gold id, predicted id)
    order; a candidate survives when the residual problem still reaches the
    optimal cardinality and cost."""
    gold_order = sorted(range(len(golds)), key=lambda j: golds[j].id)
    pred_order = sorted(range(len(preds)), key=lambda i: preds[i].id)
    fixed: list[tuple[int, int]] = []
    fixed_cost = 0.0
    free_p = set(range(len(preds)))
    free_g = set(range(len(golds)))
    for j in gold_order:
        if j not in free_g:
            continue
        for i in pred_order:
            if i not in free_p or not allowed[i, j]:
                continue
            rest_p = sorted(free_p - {i})
            rest_g = sorted(free_g - {j})
            sub = cost[np.ix_(rest_p, rest_g)] if rest_p and rest_g else np.zeros((0, 0))
            sub_allowed = (
                allowed[np.ix_(rest_p, rest_g)] if rest_p and rest_g else np.zeros((0, 0), dtype=bool)
            )
            sub_k, sub_c, _ = _solve(sub, sub_allowed)
            take = fixed_cost + cost[i, j]
            if len(fixed) + 1 + sub_k == best_k and abs(take + sub_c - best_c) < 1e-9:
                fixed.append((i, j))
                fixed_cost = take
                free_p.discard(i)
                free_g.discard(j)
                break
    return fixed
