"""Reference fixtures.

Two fixtures regression-pin the published behavior this harness reproduces:

- the qualitative error study: per-class error counts for four systems on
  four datasets (``qualitative_counts.json``). ``build_qualitative_fixture``
  expands those counts into synthetic corpora, runs, and judgments whose
  tallies reproduce the table cell for cell;
- the conjunction sentence: a 4-ary gold extraction that a binary system
  covers with one large argument, separating the containment and relaxed
  containment strategies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..ingestion import ParsedCorpus, serialize_gold, serialize_run
from ..model import DatasetMeta, ErrorClass, Extraction, Sentence, SystemRun, make_span

_SENTENCE_TOKENS = ("alpha", "bravo", "charlie", "delta", "echo", "foxtrot")
_SENTENCE_TEXT = " ".join(_SENTENCE_TOKENS) + "."
_LABEL_PARTS = ("whole", "predicate", "argument:0")


def load_qualitative_counts() -> dict:
    with resources.files(__package__).joinpath("qualitative_counts.json").open("rb") as fh:
        return json.load(fh)


def _token_span(sentence: Sentence, token_index: int):
    start = sum(len(t) + 1 for t in _SENTENCE_TOKENS[:token_index])
    return make_span(sentence, start, start + len(_SENTENCE_TOKENS[token_index]))


@dataclass(frozen=True)
class JudgmentSpec:
    """Arguments for Store.record_judgment, precomputed."""

    target_kind: str
    target_id: str
    judge_id: str
    correct: bool
    labels: tuple[tuple[str, ErrorClass], ...]
    system: str | None


@dataclass(frozen=True)
class QualitativeFixture:
    counts: dict
    corpora: dict[str, ParsedCorpus]
    runs: list[SystemRun]
    judgments: list[JudgmentSpec]


def _build_corpus(name: str, kind: str, n_sentences: int, n_gold: int) -> ParsedCorpus:
    sentences = [
        Sentence(id=f"s{i:03d}", document_id=f"{name}-doc", index=i, text=_SENTENCE_TEXT)
        for i in range(n_sentences)
    ]
    per_sentence = [n_gold // n_sentences] * n_sentences
    for i in range(n_gold % n_sentences):
        per_sentence[i] += 1
    gold: list[Extraction] = []
    n_args = 2 if kind == "binary" else 3
    for sentence, count in zip(sentences, per_sentence):
        for k in range(count):
            gold.append(
                Extraction(
                    id=f"{name}:{sentence.id}:g{k}",
                    sentence_id=sentence.id,
                    predicate=_token_span(sentence, 1),
                    arguments=tuple(
                        _token_span(sentence, (2 + k + j) % len(_SENTENCE_TOKENS))
                        for j in range(n_args)
                    ),
                )
            )
    meta = DatasetMeta(
        name=name,
        kind=kind,
        domain="synthetic",
        sentence_count=len(sentences),
        tuple_count=len(gold),
    )
    return ParsedCorpus(meta=meta, sentences=tuple(sentences), tuples=tuple(gold))


def _build_run(system: str, corpus: ParsedCorpus, n_predicted: int) -> SystemRun:
    sentences = corpus.sentences
    per_sentence = [n_predicted // len(sentences)] * len(sentences)
    for i in range(n_predicted % len(sentences)):
        per_sentence[i] += 1
    extractions: list[Extraction] = []
    for sentence, count in zip(sentences, per_sentence):
        for k in range(count):
            extractions.append(
                Extraction(
                    id=f"{system}@{corpus.meta.name}:{sentence.id}:e{k}",
                    sentence_id=sentence.id,
                    predicate=_token_span(sentence, 1),
                    arguments=(
                        _token_span(sentence, k % 2),
                        _token_span(sentence, 3 + k % 3),
                    ),
                    system=system,
                )
            )
    return SystemRun(system_name=system, dataset_name=corpus.meta.name, extractions=tuple(extractions))


def _column_judgments(
    column: dict, judge: str, system: str, run: SystemRun, gold_ids: list[str]
) -> list[JudgmentSpec]:
    ids = [t.id for t in run.extractions]
    n_correct = column["correct"]
    n_oos = column["out_of_scope"]
    specs = [
        JudgmentSpec("extraction", tid, judge, True, (), system) for tid in ids[:n_correct]
    ]
    specs += [
        JudgmentSpec(
            "extraction", tid, judge, False, (("whole", ErrorClass.OUT_OF_SCOPE),), system
        )
        for tid in ids[n_correct:n_correct + n_oos]
    ]
    # Rotate the error-class labels over the remaining extractions; counts per
    # class never exceed the pool, so no extraction sees a class twice.
    pool = ids[n_correct + n_oos:]
    labels_per_target: dict[str, list[ErrorClass]] = {tid: [] for tid in pool}
    offset = 0
    for cls in (
        ErrorClass.REDUNDANT,
        ErrorClass.UNINFORMATIVE,
        ErrorClass.WRONG_BOUNDARIES,
        ErrorClass.WRONG,
    ):
        for t in range(column[cls.value]):
            labels_per_target[pool[(offset + t) % len(pool)]].append(cls)
        offset += column[cls.value]
    for tid in pool:
        classes = labels_per_target[tid]
        if not classes:
            continue
        labels = tuple(
            (_LABEL_PARTS[i % len(_LABEL_PARTS)], cls) for i, cls in enumerate(classes)
        )
        specs.append(JudgmentSpec("extraction", tid, judge, False, labels, system))
    specs += [
        JudgmentSpec("gold", gid, judge, False, (("whole", ErrorClass.MISSING),), system)
        for gid in gold_ids[: column["missing"]]
    ]
    return specs


def build_qualitative_fixture() -> QualitativeFixture:
    counts = load_qualitative_counts()
    judge = counts["judge"]
    n_sentences = counts["sentences_per_dataset"]
    corpora: dict[str, ParsedCorpus] = {}
    runs: list[SystemRun] = []
    judgments: list[JudgmentSpec] = []
    for name, info in counts["datasets"].items():
        corpora[name] = _build_corpus(name, info["kind"], n_sentences, info["relations"])
    for name in counts["datasets"]:
        corpus = corpora[name]
        gold_ids = [g.id for g in corpus.tuples]
        for system in counts["systems"]:
            column = counts["columns"][name][system]
            run = _build_run(system, corpus, column["predicted"])
            runs.append(run)
            judgments.extend(_column_judgments(column, judge, system, run, gold_ids))
    return QualitativeFixture(counts=counts, corpora=corpora, runs=runs, judgments=judgments)


def build_conjunction_fixture() -> tuple[ParsedCorpus, SystemRun]:
    """A 4-ary gold tuple vs a binary extraction with one large argument.

    The binary extraction fails strict containment (arity mismatch) but its
    big argument contains every gold argument, so relaxed containment counts
    it: matched goes 0 -> 1 between the two strategies.
    """
    text = "DENVER BRONCOS signed LB Kenny Jackson, DT Garrett Johnson and CB Sam Young."
    sentence = Sentence(id="s000", document_id="conjunction-doc", index=0, text=text)

    def span_of(needle: str):
        start = text.index(needle)
        return make_span(sentence, start, start + len(needle))

    dataset = "conjunction"
    gold = Extraction(
        id=f"{dataset}:{sentence.id}:g0",
        sentence_id=sentence.id,
        predicate=span_of("signed"),
        arguments=(
            span_of("DENVER BRONCOS"),
            span_of("Kenny Jackson"),
            span_of("Garrett Johnson"),
            span_of("Sam Young"),
        ),
    )
    meta = DatasetMeta(
        name=dataset, kind="nary", domain="synthetic", sentence_count=1, tuple_count=1
    )
    corpus = ParsedCorpus(meta=meta, sentences=(sentence,), tuples=(gold,))

    system = "binary-demo"
    predicted = Extraction(
        id=f"{system}@{dataset}:{sentence.id}:e0",
        sentence_id=sentence.id,
        predicate=span_of("signed"),
        arguments=(
            span_of("DENVER BRONCOS"),
            span_of("LB Kenny Jackson, DT Garrett Johnson and CB Sam Young."),
        ),
        system=system,
    )
    run = SystemRun(system_name=system, dataset_name=dataset, extractions=(predicted,))
    return corpus, run


def write_fixture_files(outdir: str | Path) -> list[Path]:
    """Write the fixtures as unified-format files for CLI use."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def write(path: Path, content: str):
        path.write_text(content, encoding="utf-8")
        written.append(path)

    corpus, run = build_conjunction_fixture()
    write(outdir / "conjunction.gold.jsonl", serialize_gold(corpus.sentences, corpus.tuples))
    write(outdir / "conjunction.binary-demo.jsonl", serialize_run(run, corpus.sentences))

    fixture = build_qualitative_fixture()
    for name, parsed in fixture.corpora.items():
        write(outdir / f"{name}.gold.jsonl", serialize_gold(parsed.sentences, parsed.tuples))
    for run in fixture.runs:
        sentences = fixture.corpora[run.dataset_name].sentences
        slug = run.system_name.replace(" ", "_")
        write(outdir / f"{run.dataset_name}.{slug}.jsonl", serialize_run(run, sentences))
    return written
