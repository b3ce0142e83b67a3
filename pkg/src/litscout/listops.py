"""Operators that transform one document list into another using the citation
graph, the readership graph, or combined text similarity, plus the usage-based
reader classifier that the readership operators depend on.

All five operators are pure functions of (corpus, input ids as a set,
parameters, now); input order never matters, and every score is an exact
count except for text similarity, which is a cosine.

Wire names: references | citations | coread | similar | helper.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import EmptyListError
from .ranking import RankedList, rank
from .textindex import TermVector, TextIndex, cosine

OPERATORS = ("references", "citations", "coread", "similar", "helper")


@dataclass(frozen=True)
class ReaderClass:
    reader_id: str
    label: str  # "scientist" | "casual"
    docs_in_window: int
    days_in_window: int

    @property
    def is_scientist(self) -> bool:
        return self.label == "scientist"


def classify_readers(
    corpus: Corpus,
    now: datetime,
    window_days: int = 180,
    min_docs: int = 10,
    min_days: int = 5,
) -> dict[str, ReaderClass]:
    """Classify every known reader as probable scientist or casual.

    A reader is a scientist iff, within the window before `now`, they read at
    least `min_docs` distinct documents spread over at least `min_days`
    distinct (UTC) days. Deterministic given the corpus and the instant.
    """
    start = now - timedelta(days=window_days)
    out: dict[str, ReaderClass] = {}
    for reader in corpus.reader_ids():
        docs: set[str] = set()
        days: set = set()
        for ev in corpus.reader_events(reader):
            if start <= ev.timestamp < now:
                docs.add(ev.doc_id)
                days.add(ev.timestamp.date())
        label = "scientist" if len(docs) >= min_docs and len(days) >= min_days else "casual"
        out[reader] = ReaderClass(reader, label, len(docs), len(days))
    return out


def scientist_ids(
    corpus: Corpus,
    now: datetime,
    window_days: int = 180,
    min_docs: int = 10,
    min_days: int = 5,
) -> set[str]:
    classes = classify_readers(corpus, now, window_days, min_docs, min_days)
    return {r for r, c in classes.items() if c.is_scientist}


def _input_ids(corpus: Corpus, ranked: RankedList | Sequence[str]) -> list[str]:
    ids = ranked.ids() if isinstance(ranked, RankedList) else list(ranked)
    unique: list[str] = []
    seen: set[str] = set()
    for doc_id in ids:
        corpus.require(doc_id)
        if doc_id not in seen:
            seen.add(doc_id)
            unique.append(doc_id)
    if not unique:
        raise EmptyListError("empty list")
    return unique


def get_reference_lists(corpus: Corpus, ranked: RankedList | Sequence[str]) -> RankedList:
    """Collate the reference lists of the input documents.

    Output score = number of distinct input documents referencing the paper;
    the papers most cited *by* the input list come first.
    """
    ids = _input_ids(corpus, ranked)
    scores: dict[str, int] = {}
    for doc_id in ids:
        for ref in corpus.known_references(doc_id):
            scores[ref] = scores.get(ref, 0) + 1
    return rank(corpus, scores, f"references[{len(ids)} docs]")


def get_citation_lists(corpus: Corpus, ranked: RankedList | Sequence[str]) -> RankedList:
    """Collate the citing papers of the input documents.

    Output score = number of input documents each citing paper cites; papers
    discussing the most of the input list come first.
    """
    ids = _input_ids(corpus, ranked)
    scores: dict[str, int] = {}
    for doc_id in ids:
        for citer in corpus.citers(doc_id):
            scores[citer] = scores.get(citer, 0) + 1
    return rank(corpus, scores, f"citations[{len(ids)} docs]")


def co_read(
    corpus: Corpus,
    ranked: RankedList | Sequence[str],
    now: datetime,
    window_days: int = 90,
    scientists_only: bool = True,
    scientist_window_days: int = 180,
    scientist_min_docs: int = 10,
    scientist_min_days: int = 5,
) -> RankedList:
    """Two-hop readership walk: what else are this list's recent readers reading?

    Readers with an in-window event on any input doc qualify (optionally only
    those classified as scientists); every paper those readers touched in the
    window is scored by how many qualifying readers read it. Input docs are
    excluded from the output - the user already has them.
    """
    ids = _input_ids(corpus, ranked)
    input_set = set(ids)
    start = now - timedelta(days=window_days)

    qualifying: set[str] = set()
    for doc_id in ids:
        qualifying |= corpus.readers_in_window(doc_id, now, window_days)
    if scientists_only:
        qualifying &= scientist_ids(
            corpus, now, scientist_window_days, scientist_min_docs, scientist_min_days
        )

    readers_per_doc: dict[str, set[str]] = {}
    for reader in qualifying:
        for ev in corpus.reader_events(reader):
            if start <= ev.timestamp < now and ev.doc_id not in input_set:
                readers_per_doc.setdefault(ev.doc_id, set()).add(reader)

    scores = {d: len(rs) for d, rs in readers_per_doc.items()}
    who = "scientists" if scientists_only else "all readers"
    return rank(
        corpus,
        scores,
        f"coread[{len(ids)} docs, {window_days}d window, {who}, {len(qualifying)} qualifying]",
    )


def combine_vectors(index: TextIndex, doc_ids: Iterable[str]) -> TermVector:
    """Treat several documents as one: normalized sum of their term vectors.

    Summation runs in sorted-id order so the result is a function of the id
    set alone; float addition would otherwise leak input order at the ulp level.
    """
    combined: TermVector = {}
    for doc_id in sorted(set(doc_ids)):
        for term, w in index.doc_vector(doc_id).items():
            combined[term] = combined.get(term, 0.0) + w
    norm = sum(w * w for w in combined.values()) ** 0.5
    if norm == 0.0:
        return {}
    return {t: w / norm for t, w in combined.items()}


def similar_to_combination(
    corpus: Corpus,
    index: TextIndex,
    ranked: RankedList | Sequence[str],
    k: int | None = 50,
) -> RankedList:
    """Papers nearest (by cosine) to the input list combined into one document."""
    ids = _input_ids(corpus, ranked)
    combined = combine_vectors(index, ids)
    if not combined:
        raise EmptyListError("no text to combine")
    input_set = set(ids)
    scores: dict[str, float] = {}
    for doc_id in corpus.docs:
        if doc_id in input_set:
            continue
        sim = cosine(combined, index.doc_vector(doc_id))
        if sim > 0.0:
            scores[doc_id] = sim
    return rank(corpus, scores, f"similar[{len(ids)} docs combined]").truncated(k)


def citation_helper(corpus: Corpus, ranked: RankedList | Sequence[str], n: int | None = 10) -> RankedList:
    """Suggest likely missed references: near neighbors of the list in the
    citation graph that are not in the list.

    score(c) = |inputs referencing c| + |inputs referenced by c|
             + |inputs sharing at least one citing paper with c|.
    """
    ids = _input_ids(corpus, ranked)
    if len(ids) < 2:
        raise EmptyListError(
            "citation helper needs at least 2 documents; use the references/citations"
            " buttons for a single paper"
        )
    input_set = set(ids)

    referenced_by_input: dict[str, int] = {}
    referencing_input: dict[str, int] = {}
    for doc_id in ids:
        for ref in corpus.known_references(doc_id):
            referenced_by_input[ref] = referenced_by_input.get(ref, 0) + 1
        for citer in corpus.citers(doc_id):
            referencing_input[citer] = referencing_input.get(citer, 0) + 1

    # co-citation candidates: anything cited alongside an input doc
    cocite_candidates: set[str] = set()
    for doc_id in ids:
        for citer in corpus.citers(doc_id):
            cocite_candidates.update(corpus.known_references(citer))

    candidates = (set(referenced_by_input) | set(referencing_input) | cocite_candidates) - input_set
    scores: dict[str, int] = {}
    for cand in candidates:
        cociting = sum(1 for d in ids if corpus.citers(d) & corpus.citers(cand))
        total = referenced_by_input.get(cand, 0) + referencing_input.get(cand, 0) + cociting
        if total > 0:
            scores[cand] = total
    return rank(corpus, scores, f"helper[{len(ids)} docs]").truncated(n)
