"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines; plain ``pytest`` runs them silently.
"""

import itertools
import random
import time

import pytest
from fastapi.testclient import TestClient

from oiebench.errors import JudgmentRuleError
from oiebench.exports import errors_csv
from oiebench.fixtures import build_conjunction_fixture, build_qualitative_fixture
from oiebench.ingestion import parse_gold, serialize_gold
from oiebench.matching import align_tuples
from oiebench.model import ErrorClass, Judgment, MatchStrategy
from oiebench.scoring import evaluate_run, f_beta, tally_errors
from oiebench.service import create_app
from oiebench.store import Store, _frame, read_log

from helpers import (
    apply_random_events,
    brute_force_max_pairs,
    random_corpus,
    random_sentence_fixture,
)

EQ = MatchStrategy.EQUAL
CONT = MatchStrategy.CONTAINMENT
RELAX = MatchStrategy.RELAXED_CONTAINMENT


def _passed(name: str):
    print(f"\n[PASS] {name}")


# (dataset, strategy) -> (P, R, F2) per system, as published: ClausIE,
# OpenIE 4.2, Stanford OIE, PredPatt.
PUBLISHED_SCORES = {
    ("PENN-100", "a"): [(4.00, 21.15, 11.39), (12.41, 36.54, 26.31), (14.85, 57.69, 36.58), (6.83, 42.30, 20.75)],
    ("PENN-100", "b"): [(4.00, 21.15, 11.39), (13.07, 38.46, 27.70), (14.85, 57.69, 36.59), (7.76, 48.08, 23.58)],
    ("WEB-500", "a"): [(16.33, 46.70, 34.03), (12.83, 19.62, 17.74), (13.65, 40.72, 29.16), (5.18, 13.43, 10.19)],
    ("WEB-500", "b"): [(16.33, 46.70, 34.03), (13.39, 20.47, 18.51), (13.65, 40.72, 29.16), (6.09, 15.78, 11.97)],
    ("NYT-222", "a"): [(1.64, 5.85, 3.87), (2.86, 7.66, 5.73), (0.0, 0.0, 0.0), (2.22, 13.51, 6.71)],
    ("NYT-222", "b"): [(4.69, 16.67, 11.03), (11.28, 30.18, 22.60), (13.37, 73.87, 38.77), (8.47, 51.35, 25.51)],
    ("OIE2016", "a"): [(14.81, 13.67, 13.89), (24.85, 18.69, 19.67), (0.80, 1.49, 1.27), (7.26, 12.39, 10.86)],
    ("OIE2016", "b"): [(20.38, 18.81, 19.10), (39.58, 29.76, 31.31), (3.83, 7.10, 6.07), (13.52, 23.09, 20.23)],
}


def test_f2_arithmetic_reproduction():
    """All 32 published (P, R, F2) triples reproduce within +/-0.05."""
    started = time.perf_counter()
    checked = 0
    for (dataset, variant), cells in PUBLISHED_SCORES.items():
        for p, r, f2_printed in cells:
            f2 = f_beta(p / 100, r / 100, 2) * 100
            assert f2 == pytest.approx(f2_printed, abs=0.05), (dataset, variant, p, r)
            checked += 1
    assert checked == 32
    # the all-zero row exercised the 0/0 guard
    assert f_beta(0.0, 0.0, 2) == 0.0
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _passed(f"F2 arithmetic reproduction: 32/32 triples within 0.05 ({elapsed:.3f}s)")


# Expected error-tally table, columns sorted by (dataset, system):
# NYT-222, OIE2016, PENN-100, WEB-500 x ClausIE, OpenIE 4.2, PredPatt, Stanford OIE.
EXPECTED_TALLY_ROWS = {
    "relations":        [17, 17, 17, 17, 29, 29, 29, 29, 17, 17, 17, 17, 17, 17, 17, 17],
    "predicted":        [42, 35, 68, 74, 28, 30, 57, 91, 63, 34, 61, 49, 33, 22, 24, 38],
    "correct":          [2, 1, 6, 0, 8, 12, 6, 5, 4, 8, 10, 11, 5, 4, 3, 10],
    "redundant":        [0, 0, 0, 5, 0, 0, 0, 18, 1, 0, 0, 4, 2, 0, 0, 0],
    "uninformative":    [4, 2, 8, 0, 2, 0, 6, 1, 9, 3, 9, 4, 0, 0, 0, 3],
    "wrong_boundaries": [11, 17, 18, 39, 11, 11, 21, 69, 14, 5, 9, 14, 8, 9, 9, 9],
    "wrong":            [2, 1, 3, 5, 1, 1, 6, 3, 3, 1, 10, 4, 1, 2, 2, 2],
    "out_of_scope":     [24, 17, 34, 30, 7, 6, 21, 13, 33, 17, 31, 18, 19, 8, 12, 14],
    "missing":          [4, 1, 5, 5, 8, 4, 7, 12, 14, 6, 6, 7, 8, 3, 11, 6],
}


def test_error_tally_reproduction():
    """The shipped judgment fixture reproduces the error table cell for cell."""
    started = time.perf_counter()
    fixture = build_qualitative_fixture()
    judgments_by_run = {}
    for spec in fixture.judgments:
        j = Judgment(
            id=f"{spec.system}:{spec.target_id}",
            target_kind=spec.target_kind,
            target_id=spec.target_id,
            judge_id=spec.judge_id,
            correct=spec.correct,
            labels=frozenset(spec.labels),
            system=spec.system,
        )
        judgments_by_run.setdefault((_dataset_of(spec.target_id), spec.system), []).append(j)
    tallies = []
    gold_counts = {}
    for run in fixture.runs:
        corpus = fixture.corpora[run.dataset_name]
        gold_counts[run.dataset_name] = len(corpus.tuples)
        judgments = judgments_by_run.get((run.dataset_name, run.system_name), [])
        tallies.append(tally_errors(judgments, run, list(corpus.tuples)))
    csv_text = errors_csv(tallies, gold_counts)
    lines = csv_text.strip().split("\n")
    table = {line.split(",")[0]: line.split(",")[1:] for line in lines[1:]}
    total_predicted = 0
    for metric, expected in EXPECTED_TALLY_ROWS.items():
        got = [int(x) for x in table[metric]]
        assert got == expected, f"{metric}: {got} != {expected}"
        if metric == "predicted":
            total_predicted = sum(got)
    assert total_predicted == 749
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _passed(f"error tally reproduction: 16 columns x 9 rows cell-for-cell ({elapsed:.3f}s)")


def _dataset_of(target_id: str) -> str:
    """Dataset owning a judgment target; target ids embed it before ':'."""
    token = target_id.split(":", 1)[0]
    return token.split("@", 1)[1] if "@" in token else token


def test_recall_monotone_across_strategies():
    """Over >=1000 random sentence fixtures, matched counts (hence recall)
    never decrease from equal to containment to relaxed containment."""
    rng = random.Random(20240817)
    violations = 0
    fixtures = 0
    for _ in range(1000):
        _, gold, predicted = random_sentence_fixture(rng, max_gold=4, max_pred=5)
        sid = (gold + predicted)[0].sentence_id if (gold or predicted) else "s"
        matched = {
            strategy: len(align_tuples(predicted, gold, strategy, sentence_id=sid).pairs)
            for strategy in (EQ, CONT, RELAX)
        }
        if not (matched[EQ] <= matched[CONT] <= matched[RELAX]):
            violations += 1
        fixtures += 1
    assert fixtures >= 1000
    assert violations == 0
    _passed(f"strategy monotonicity: 0 violations over {fixtures} fixtures")


def test_alignment_matches_brute_force_oracle():
    """Over >=500 small instances, |pairs| equals the exhaustive maximum."""
    started = time.perf_counter()
    rng = random.Random(424242)
    strategies = list(MatchStrategy)
    instances = 0
    for n in range(500):
        _, gold, predicted = random_sentence_fixture(rng, max_gold=5, max_pred=5)
        sid = (gold + predicted)[0].sentence_id if (gold or predicted) else "s"
        strategy = strategies[n % 3]
        got = len(align_tuples(predicted, gold, strategy, sentence_id=sid).pairs)
        expected = brute_force_max_pairs(predicted, gold, strategy)
        assert got == expected
        instances += 1
    elapsed = time.perf_counter() - started
    assert instances >= 500
    assert elapsed < 10.0
    _passed(f"alignment oracle equivalence: {instances} instances ({elapsed:.2f}s)")


def test_conjunction_fixture_contrast():
    """4-ary gold vs binary extraction: 0 matched strict, 1 matched relaxed."""
    corpus, run = build_conjunction_fixture()
    gold = list(corpus.tuples)
    strict = evaluate_run(run, gold, CONT)
    relaxed = evaluate_run(run, gold, RELAX)
    assert strict.n_matched == 0 and strict.recall == 0.0
    assert relaxed.n_matched == 1 and relaxed.recall == 1.0
    _passed("conjunction fixture: matched 0 under containment, 1 under relaxed")


def test_round_trip_thousand_sentences():
    """parse -> serialize -> parse identity on a 1000-sentence corpus."""
    rng = random.Random(55555)
    corpus = random_corpus(rng, 1000, name="bigrand")
    content = serialize_gold(corpus.sentences, corpus.tuples)
    first = parse_gold(content, "bigrand")
    assert first.meta.sentence_count == 1000
    serialized = serialize_gold(first.sentences, first.tuples)
    second = parse_gold(serialized, "bigrand")
    assert first == second
    assert serialize_gold(second.sentences, second.tuples) == serialized
    _passed("round-trip: 1000-sentence corpus, parse/serialize/parse identity")


def test_store_replay_determinism_and_prefixes(tmp_path):
    """100 random event logs: full replay digest equality and every prefix
    replays to the state recorded at that point."""
    rng = random.Random(808080)
    logs = 0
    prefix_checks = 0
    for case in range(100):
        path = tmp_path / f"log{case}"
        store = Store(path)
        digests = apply_random_events(rng, store)
        assert Store(path).digest() == store.digest()  # kill + replay
        records = read_log(path)
        header, events = records[0], records[1:]
        assert len(events) == len(digests)
        prefix_path = tmp_path / f"log{case}-prefix"
        for k in range(len(events) + 1):
            with open(prefix_path, "wb") as fh:
                fh.write(_frame(header))
                for e in events[:k]:
                    fh.write(_frame(e))
            replayed = Store(prefix_path)
            if k > 0:
                assert replayed.digest() == digests[k - 1]
            prefix_checks += 1
            prefix_path.unlink()
        logs += 1
    assert logs == 100
    _passed(f"store replay determinism: {logs} logs, {prefix_checks} prefixes")


def test_judgment_exclusivity_exhaustive(tmp_path):
    """Every judgment combining out-of-scope with another class is rejected
    at both the store and the service layer, over all 6x6 class pairs."""
    store = Store(tmp_path / "log")
    corpus, run = build_conjunction_fixture()
    store.import_corpus(corpus)
    store.import_run(run)
    client = TestClient(create_app(store))
    target = run.extractions[0].id

    checked = 0
    oos_rejected = 0
    for c1, c2 in itertools.product(ErrorClass, ErrorClass):
        if c1 is c2 is ErrorClass.OUT_OF_SCOPE:
            labels = [("whole", ErrorClass.OUT_OF_SCOPE)]
        else:
            labels = [("predicate", c1), ("argument:0", c2)]
        must_reject = (
            (ErrorClass.OUT_OF_SCOPE in (c1, c2) and not c1 is c2 is ErrorClass.OUT_OF_SCOPE)
            or ErrorClass.MISSING in (c1, c2)  # missing never applies to a predicted extraction
        )
        # store layer
        store_rejected = False
        try:
            store.record_judgment(
                "extraction", target, f"judge-{c1.value}-{c2.value}", False, labels=labels
            )
        except JudgmentRuleError:
            store_rejected = True
        assert store_rejected == must_reject, (c1, c2)
        # service layer
        response = client.post(
            "/judgments",
            json={
                "target_kind": "extraction",
                "target_id": target,
                "correct": False,
                "labels": [[part, cls.value] for part, cls in labels],
            },
            headers={"X-Judge-Id": f"svc-judge-{c1.value}-{c2.value}"},
        )
        assert (response.status_code == 422) == must_reject, (c1, c2, response.status_code)
        if ErrorClass.OUT_OF_SCOPE in (c1, c2) and not c1 is c2 is ErrorClass.OUT_OF_SCOPE:
            assert store_rejected and response.status_code == 422
            oos_rejected += 1
        checked += 1
    assert checked == 36
    assert oos_rejected == 10  # 2*5 ordered pairs mixing out_of_scope with another class
    _passed(f"judgment invariants: 36 class pairs checked, {oos_rejected} out-of-scope combos rejected")
