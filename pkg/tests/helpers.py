"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import random
import string

from oiebench.ingestion import ParsedCorpus
from oiebench.matching import tuple_matches
from oiebench.model import (
    DatasetMeta,
    Extraction,
    MatchStrategy,
    Sentence,
    Span,
    make_span,
)


def mk_sentence(text: str, sid: str = "s0", doc: str = "d0", idx: int = 0) -> Sentence:
    return Sentence(id=sid, document_id=doc, index=idx, text=text)


def mk_tuple(
    sentence: Sentence,
    predicate: tuple[int, int],
    args: list[tuple[int, int]],
    tid: str = "t0",
    system: str | None = None,
) -> Extraction:
    return Extraction(
        id=tid,
        sentence_id=sentence.id,
        predicate=make_span(sentence, *predicate),
        arguments=tuple(make_span(sentence, *a) for a in args),
        system=system,
    )


def random_span(rng: random.Random, sentence: Sentence) -> Span:
    length = len(sentence.text)
    start = rng.randrange(0, length)
    end = rng.randrange(start + 1, length + 1)
    return make_span(sentence, start, end)


def containing_span(rng: random.Random, sentence: Sentence, inner: Span) -> Span:
    start = rng.randrange(0, inner.start + 1)
    end = rng.randrange(inner.end, len(sentence.text) + 1)
    return make_span(sentence, start, end)


def random_gold_tuples(rng: random.Random, sentence: Sentence, n: int, tid_prefix: str = "g") -> list[Extraction]:
    tuples = []
    for k in range(n):
        tuples.append(
            Extraction(
                id=f"{tid_prefix}{k}",
                sentence_id=sentence.id,
                predicate=random_span(rng, sentence),
                arguments=tuple(random_span(rng, sentence) for _ in range(rng.randint(0, 7))),
            )
        )
    return tuples


def random_predicted_tuples(
    rng: random.Random, sentence: Sentence, gold: list[Extraction], n: int
) -> list[Extraction]:
    """Mix of exact copies, widened variants, merged-argument variants, and noise,
    so all three strategies disagree on a healthy share of fixtures."""
    tuples = []
    for k in range(n):
        mode = rng.random()
        base = rng.choice(gold) if gold else None
        if base is None or mode < 0.25:
            predicate = random_span(rng, sentence)
            args = tuple(random_span(rng, sentence) for _ in range(rng.randint(0, 7)))
        elif mode < 0.45:  # exact copy
            predicate = base.predicate
            args = base.arguments
        elif mode < 0.70:  # widened spans, same arity
            predicate = containing_span(rng, sentence, base.predicate)
            args = tuple(containing_span(rng, sentence, a) for a in base.arguments)
        else:  # binary-style: one span covering all gold arguments
            predicate = containing_span(rng, sentence, base.predicate)
            if base.arguments:
                lo = min(a.start for a in base.arguments)
                hi = max(a.end for a in base.arguments)
                big = make_span(sentence, lo, hi)
                args = (containing_span(rng, sentence, big),)
            else:
                args = ()
        tuples.append(
            Extraction(
                id=f"p{k}",
                sentence_id=sentence.id,
                predicate=predicate,
                arguments=args,
                system="sys",
            )
        )
    return tuples


def random_sentence_fixture(
    rng: random.Random, max_gold: int = 4, max_pred: int = 5
) -> tuple[Sentence, list[Extraction], list[Extraction]]:
    text = "".join(rng.choice(string.ascii_lowercase + "  ") for _ in range(rng.randint(20, 60)))
    text = text.replace("  ", " x")  # keep it non-degenerate
    sentence = mk_sentence(text, sid=f"s{rng.randrange(10**6)}")
    gold = random_gold_tuples(rng, sentence, rng.randint(0, max_gold))
    predicted = random_predicted_tuples(rng, sentence, gold, rng.randint(0, max_pred))
    return sentence, gold, predicted


def brute_force_max_pairs(
    predicted: list[Extraction], gold: list[Extraction], strategy: MatchStrategy
) -> int:
    """Exhaustive maximum one-to-one matching size; independent of align_tuples."""
    edges = [[tuple_matches(p, g, strategy) for g in gold] for p in predicted]

    def best(i: int, used: frozenset[int]) -> int:
        if i == len(predicted):
            return 0
        top = best(i + 1, used)  # leave predicted i unmatched
        for j in range(len(gold)):
            if j not in used and edges[i][j]:
                top = max(top, 1 + best(i + 1, used | {j}))
        return top

    return best(0, frozenset())


def apply_random_events(rng: random.Random, store) -> list[str]:
    """Drive a store through a random command sequence; digest after each event."""
    from oiebench.model import SystemRun
    import dataclasses

    digests = []
    corpus = random_corpus(rng, rng.randint(2, 5), name=f"ds{rng.randrange(10**6)}")
    store.import_corpus(corpus)
    digests.append(store.digest())
    extractions = tuple(
        dataclasses.replace(
            t, id=f"sys@{corpus.meta.name}:{t.sentence_id}:e0", system="sys"
        )
        for t in corpus.tuples[:3]
    )
    run = SystemRun("sys", corpus.meta.name, extractions)
    store.import_run(run)
    digests.append(store.digest())
    annotation_ids = []
    for _ in range(rng.randint(1, 6)):
        action = rng.random()
        sentence = rng.choice(corpus.sentences)
        if action < 0.4 or not annotation_ids:
            length = len(sentence.text)
            start = rng.randrange(0, length - 1)
            end = rng.randrange(start + 1, length)
            a = store.create_annotation(corpus.meta.name, sentence.id, (start, end), [])
            annotation_ids.append(a.id)
        elif action < 0.7 and extractions:
            store.record_judgment(
                "extraction", rng.choice(extractions).id, f"judge-{rng.randint(0, 1)}", True
            )
        else:
            store.delete_annotation(annotation_ids.pop())
        digests.append(store.digest())
    return digests


_NOISE_SNIPPETS = (
    "&amp; profits &gt; estimates",
    "BREAKING: shares (NYSE:XYZ) up",
    "café Übernahme — unfinished",
    "<b>Headline</b> w/o verb",
)


def random_corpus(rng: random.Random, n_sentences: int, name: str = "rand") -> ParsedCorpus:
    sentences = []
    tuples = []
    for i in range(n_sentences):
        words = [
            "".join(rng.choice(string.ascii_letters) for _ in range(rng.randint(2, 9)))
            for _ in range(rng.randint(4, 12))
        ]
        if rng.random() < 0.2:
            words.insert(rng.randrange(len(words)), rng.choice(_NOISE_SNIPPETS))
        text = " ".join(words)
        sentence = Sentence(
            id=f"{name}-s{i:04d}", document_id=f"doc{i % 7}", index=i, text=text
        )
        sentences.append(sentence)
        for k in range(rng.randint(0, 3)):
            n_args = rng.randint(0, 4)
            confidence = round(rng.random(), 6) if rng.random() < 0.3 else None
            tuples.append(
                Extraction(
                    id=f"{name}:{sentence.id}:g{k}",
                    sentence_id=sentence.id,
                    predicate=random_span(rng, sentence),
                    arguments=tuple(random_span(rng, sentence) for _ in range(n_args)),
                    confidence=confidence,
                )
            )
    meta = DatasetMeta(
        name=name,
        kind="binary" if all(t.arity == 2 for t in tuples) else "nary",
        domain="synthetic",
        sentence_count=len(sentences),
        tuple_count=len(tuples),
    )
    return ParsedCorpus(meta=meta, sentences=tuple(sentences), tuples=tuple(tuples))
