import json
import random

import pytest

from oiebench.errors import FormatError, UnknownIdError
from oiebench.ingestion import (
    parse_gold,
    parse_run,
    serialize_gold,
    serialize_run,
    validate_corpus,
)
from oiebench.model import SystemRun

from helpers import random_corpus


def record(sent_id="s1", doc="d1", idx=0, text="Obama flew to Berlin.", tuples=None):
    if tuples is None:
        tuples = [
            {
                "predicate": {"start": 6, "end": 10, "surface": "flew"},
                "args": [
                    {"start": 0, "end": 5, "surface": "Obama"},
                    {"start": 11, "end": 20, "surface": "to Berlin"},
                ],
            }
        ]
    return {"doc_id": doc, "sent_idx": idx, "sent_id": sent_id, "text": text, "tuples": tuples}


def lines(*objs):
    return "".join(json.dumps(o, ensure_ascii=False) + "\n" for o in objs)


class TestParseGold:
    def test_minimal_binary_corpus(self):
        corpus = parse_gold(lines(record()), "mini")
        assert corpus.meta.kind == "binary"
        assert corpus.meta.sentence_count == 1
        assert corpus.meta.tuple_count == 1
        t = corpus.tuples[0]
        assert t.predicate.surface == "flew"
        assert [a.surface for a in t.arguments] == ["Obama", "to Berlin"]
        assert t.id == "mini:s1:g0"

    def test_penn_sized_corpus_counts(self):
        # 100 sentences but only 51 carry a gold tuple.
        records = []
        for i in range(100):
            tuples = [] if i >= 51 else None
            records.append(record(sent_id=f"s{i}", idx=i, tuples=tuples))
        corpus = parse_gold(lines(*records), "PENN-100")
        assert corpus.meta.sentence_count == 100
        assert corpus.meta.tuple_count == 51

    def test_nary_kind_inferred(self):
        r = record(
            tuples=[
                {
                    "predicate": {"start": 6, "end": 10, "surface": "flew"},
                    "args": [{"start": 0, "end": 5, "surface": "Obama"}],
                }
            ]
        )
        assert parse_gold(lines(r), "x").meta.kind == "nary"

    def test_malformed_line_cites_line_number(self):
        content = lines(record(sent_id="s1"), record(sent_id="s2", idx=1)) + "{broken\n"
        with pytest.raises(FormatError) as exc:
            parse_gold(content, "x")
        assert exc.value.line == 3

    def test_offset_violation_cites_sentence(self):
        bad = record(
            tuples=[
                {
                    "predicate": {"start": 6, "end": 99, "surface": "flew"},
                    "args": [],
                }
            ]
        )
        with pytest.raises(FormatError) as exc:
            parse_gold(lines(bad), "x")
        assert "s1" in str(exc.value)
        assert exc.value.line == 1

    def test_surface_mismatch_rejected(self):
        bad = record(
            tuples=[
                {
                    "predicate": {"start": 6, "end": 10, "surface": "grew"},
                    "args": [],
                }
            ]
        )
        with pytest.raises(FormatError) as exc:
            parse_gold(lines(bad), "x")
        assert "grew" in str(exc.value)

    def test_duplicate_sentence_id_rejected(self):
        with pytest.raises(FormatError) as exc:
            parse_gold(lines(record(), record(idx=1)), "x")
        assert exc.value.line == 2

    def test_duplicate_document_position_rejected(self):
        with pytest.raises(FormatError):
            parse_gold(lines(record(sent_id="s1"), record(sent_id="s2")), "x")

    def test_synthetic_predicate_imported(self):
        r = record(
            text="At least one potential GEC partner, Matra, insists it isn't interested.",
            tuples=[
                {
                    "predicate": {"start": 0, "end": 0, "surface": "partner", "synthetic": True},
                    "args": [
                        {"start": 23, "end": 26, "surface": "GEC"},
                        {"start": 36, "end": 41, "surface": "Matra"},
                    ],
                }
            ],
        )
        corpus = parse_gold(lines(r), "x")
        assert corpus.tuples[0].predicate.is_synthetic
        assert corpus.tuples[0].predicate.surface == "partner"

    def test_synthetic_with_nonzero_anchor_rejected(self):
        r = record(
            tuples=[
                {
                    "predicate": {"start": 1, "end": 3, "surface": "xy", "synthetic": True},
                    "args": [],
                }
            ]
        )
        with pytest.raises(FormatError):
            parse_gold(lines(r), "x")

    def test_confidence_bounds_checked(self):
        r = record(
            tuples=[
                {
                    "predicate": {"start": 6, "end": 10, "surface": "flew"},
                    "args": [],
                    "confidence": 1.5,
                }
            ]
        )
        with pytest.raises(FormatError):
            parse_gold(lines(r), "x")

    def test_empty_text_rejected(self):
        with pytest.raises(FormatError):
            parse_gold(lines(record(text="", tuples=[])), "x")

    def test_dataset_name_with_colon_rejected(self):
        with pytest.raises(FormatError):
            parse_gold(lines(record()), "a:b")

    def test_noisy_text_is_legal_content(self):
        noisy = "Stocks &amp; shares &gt; forecasts — BREAKING"
        r = record(
            text=noisy,
            tuples=[{"predicate": {"start": 7, "end": 12, "surface": "&amp;"}, "args": []}],
        )
        corpus = parse_gold(lines(r), "noisy")
        assert corpus.sentences[0].text == noisy
        assert validate_corpus(corpus.sentences, corpus.tuples) == []


class TestParseRun:
    def _dataset(self):
        return parse_gold(lines(record(sent_id="s1"), record(sent_id="s2", idx=1)), "d")

    def _run_lines(self, *records, system="sys", dataset="d"):
        return lines({"system": system, "dataset": dataset}, *records)

    def test_minimal_run(self):
        corpus = self._dataset()
        content = self._run_lines(record(sent_id="s1"), record(sent_id="s2", idx=1))
        run = parse_run(content, corpus.meta, corpus.sentences)
        assert run.system_name == "sys"
        assert len(run.extractions) == 2
        assert run.extractions[0].id == "sys@d:s1:e0"
        assert run.extractions[0].system == "sys"

    def test_unknown_sentence_rejected_by_name(self):
        corpus = self._dataset()
        content = self._run_lines(record(sent_id="s99"))
        with pytest.raises(UnknownIdError) as exc:
            parse_run(content, corpus.meta, corpus.sentences)
        assert "s99" in str(exc.value)

    def test_140_extractions_for_one_sentence_accepted(self):
        corpus = self._dataset()
        tuples = [
            {"predicate": {"start": 6, "end": 10, "surface": "flew"}, "args": []}
            for _ in range(140)
        ]
        content = self._run_lines(record(sent_id="s1", tuples=tuples))
        run = parse_run(content, corpus.meta, corpus.sentences)
        assert len(run.extractions) == 140

    def test_header_dataset_mismatch_rejected(self):
        corpus = self._dataset()
        content = self._run_lines(record(sent_id="s1"), dataset="other")
        with pytest.raises(FormatError):
            parse_run(content, corpus.meta, corpus.sentences)

    def test_system_crosscheck(self):
        corpus = self._dataset()
        content = self._run_lines(record(sent_id="s1"))
        with pytest.raises(FormatError):
            parse_run(content, corpus.meta, corpus.sentences, system_name="expected")

    def test_text_divergence_rejected(self):
        corpus = self._dataset()
        bad = record(sent_id="s1", text="Something else entirely here.", tuples=[])
        with pytest.raises(FormatError):
            parse_run(self._run_lines(bad), corpus.meta, corpus.sentences)

    def test_missing_header_rejected(self):
        corpus = self._dataset()
        with pytest.raises(FormatError):
            parse_run(lines(record(sent_id="s1")), corpus.meta, corpus.sentences)

    def test_confidence_preserved(self):
        corpus = self._dataset()
        r = record(
            sent_id="s1",
            tuples=[
                {
                    "predicate": {"start": 6, "end": 10, "surface": "flew"},
                    "args": [],
                    "confidence": 0.75,
                }
            ],
        )
        run = parse_run(self._run_lines(r), corpus.meta, corpus.sentences)
        assert run.extractions[0].confidence == 0.75


class TestValidateCorpus:
    def test_well_formed_corpus_clean(self):
        corpus = parse_gold(lines(record()), "x")
        assert validate_corpus(corpus.sentences, corpus.tuples) == []

    def test_stale_surface_cache_detected(self):
        import dataclasses

        corpus = parse_gold(lines(record()), "x")
        t = corpus.tuples[0]
        broken = dataclasses.replace(
            t, predicate=dataclasses.replace(t.predicate, surface="nope")
        )
        violations = validate_corpus(corpus.sentences, [broken])
        assert len(violations) == 1
        assert violations[0].kind == "bad_span"

    def test_unknown_sentence_reference_detected(self):
        corpus = parse_gold(lines(record()), "x")
        import dataclasses

        stray = dataclasses.replace(corpus.tuples[0], sentence_id="sX")
        violations = validate_corpus(corpus.sentences, [stray])
        assert violations and violations[0].kind == "unknown_sentence"


class TestRoundTrip:
    def test_small_corpus_round_trip(self):
        content = lines(record(sent_id="s1"), record(sent_id="s2", idx=1, tuples=[]))
        first = parse_gold(content, "x")
        serialized = serialize_gold(first.sentences, first.tuples)
        second = parse_gold(serialized, "x")
        assert first == second
        assert serialize_gold(second.sentences, second.tuples) == serialized

    def test_random_corpus_round_trip(self):
        rng = random.Random(97)
        corpus = random_corpus(rng, 60)
        content = serialize_gold(corpus.sentences, corpus.tuples)
        first = parse_gold(content, "rand")
        serialized = serialize_gold(first.sentences, first.tuples)
        second = parse_gold(serialized, "rand")
        assert first == second
        assert serialized == serialize_gold(second.sentences, second.tuples)

    def test_run_round_trip(self):
        gold = parse_gold(lines(record(sent_id="s1"), record(sent_id="s2", idx=1)), "d")
        content = lines(
            {"system": "sys", "dataset": "d"},
            record(sent_id="s1"),
            record(sent_id="s2", idx=1),
        )
        first = parse_run(content, gold.meta, gold.sentences)
        serialized = serialize_run(first, gold.sentences)
        second = parse_run(serialized, gold.meta, gold.sentences)
        assert first == second

    def test_unicode_offsets_survive(self):
        text = "café Übernahme — moskau"
        r = record(
            text=text,
            tuples=[{"predicate": {"start": 5, "end": 14, "surface": "Übernahme"}, "args": []}],
        )
        first = parse_gold(lines(r), "u")
        serialized = serialize_gold(first.sentences, first.tuples)
        assert parse_gold(serialized, "u") == first
        assert "Übernahme" in serialized


def test_serialize_accepts_systemrun_shape():
    gold = parse_gold(lines(record(sent_id="s1")), "d")
    run = SystemRun("sys", "d", ())
    assert serialize_run(run, gold.sentences).startswith('{"system": "sys"')
