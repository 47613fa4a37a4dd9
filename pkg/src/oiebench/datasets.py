"""Registry of the commonly benchmarked gold datasets.

Published sentence and tuple counts for the four corpora this harness ships
importers for. Imports matching a registered name are checked against these
counts; a mismatch is reported as a warning, not an error, since subsets are
legitimate (e.g. partial OIE2016 exports).
"""

from __future__ import annotations

from .model import DatasetMeta

KNOWN_DATASETS: dict[str, DatasetMeta] = {
    meta.name: meta
    for meta in (
        DatasetMeta(name="NYT-222", kind="nary", domain="News", sentence_count=222, tuple_count=222),
        DatasetMeta(name="WEB-500", kind="binary", domain="Web/News", sentence_count=500, tuple_count=461),
        DatasetMeta(name="PENN-100", kind="binary", domain="Mixed", sentence_count=100, tuple_count=51),
        DatasetMeta(name="OIE2016", kind="nary", domain="Wiki", sentence_count=3200, tuple_count=10359),
    )
}


def registry_warnings(meta: DatasetMeta) -> list[str]:
    """Differences between an imported corpus and its registered counterpart."""
    known = KNOWN_DATASETS.get(meta.name)
    if known is None:
        return []
    notes = []
    if meta.sentence_count != known.sentence_count:
        notes.append(
            f"{meta.name}: imported {meta.sentence_count} sentences, "
            f"published corpus has {known.sentence_count}"
        )
    if meta.tuple_count != known.tuple_count:
        notes.append(
            f"{meta.name}: imported {meta.tuple_count} tuples, "
            f"published corpus has {known.tuple_count}"
        )
    if meta.kind != known.kind:
        notes.append(f"{meta.name}: imported as {meta.kind}, published corpus is {known.kind}")
    return notes
