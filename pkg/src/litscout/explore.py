"""Explore-the-field pipelines: an automated chain of one sorted query and one
list operator, with a truncation between the stages.

    reviews  - most-cited matches, then collated citing papers: finds papers
               that cite many highly cited papers on the topic (reviews and
               introductions).
    experts  - most-relevant matches, then collated reference lists: what the
               papers in the field lean on, often methods papers that do not
               match the query text at all. No topical filter is applied.
    reading  - most-popular matches, then the co-read walk: what the people in
               the subfield are reading right now.

Each pipeline is exactly its two stages; nothing is added or hidden, so a
manual stage-by-stage invocation gives a bit-identical result.
"""
from __future__ import annotations

from datetime import datetime

from .corpus import Corpus
from .listops import co_read, get_citation_lists, get_reference_lists
from .ranking import RankedList
from .search import QuerySpec, run_query, spec_with_sort
from .textindex import TextIndex

EXPLORE_MODES = ("reviews", "experts", "reading")


def _stage_one(
    corpus: Corpus,
    index: TextIndex,
    spec: QuerySpec,
    sort: str,
    now: datetime,
    truncation: int,
    popular_window_days: int,
) -> RankedList:
    first = run_query(
        corpus, index, spec_with_sort(spec, sort), now, popular_window_days=popular_window_days
    )
    return first.truncated(truncation, f"truncated to {min(truncation, len(first))}")


def reviews_and_introductory(
    corpus: Corpus,
    index: TextIndex,
    spec: QuerySpec,
    now: datetime,
    truncation: int = 200,
    k: int | None = None,
) -> RankedList:
    """Papers citing the most of the top-cited matches: reviews and intros."""
    stage1 = _stage_one(corpus, index, spec, "cited", now, truncation, 90)
    if not stage1.items:
        return RankedList([], f"explore[reviews]: {stage1.provenance} | empty first stage")
    out = get_citation_lists(corpus, stage1)
    return RankedList(out.items, f"explore[reviews]: {stage1.provenance} -> {out.provenance}").truncated(k)


def what_experts_cite(
    corpus: Corpus,
    index: TextIndex,
    spec: QuerySpec,
    now: datetime,
    truncation: int = 200,
    k: int | None = None,
) -> RankedList:
    """Papers most heavily referenced by the most relevant matches."""
    stage1 = _stage_one(corpus, index, spec, "relevant", now, truncation, 90)
    if not stage1.items:
        return RankedList([], f"explore[experts]: {stage1.provenance} | empty first stage")
    out = get_reference_lists(corpus, stage1)
    return RankedList(out.items, f"explore[experts]: {stage1.provenance} -> {out.provenance}").truncated(k)


def what_people_are_reading(
    corpus: Corpus,
    index: TextIndex,
    spec: QuerySpec,
    now: datetime,
    truncation: int = 200,
    k: int | None = None,
    window_days: int = 90,
    scientist_window_days: int = 180,
    scientist_min_docs: int = 10,
    scientist_min_days: int = 5,
) -> RankedList:
    """Papers currently being heavily read by scientists in the subfield."""
    stage1 = _stage_one(corpus, index, spec, "popular", now, truncation, window_days)
    if not stage1.items:
        return RankedList([], f"explore[reading]: {stage1.provenance} | empty first stage")
    out = co_read(
        corpus,
        stage1,
        now,
        window_days=window_days,
        scientists_only=True,
        scientist_window_days=scientist_window_days,
        scientist_min_docs=scientist_min_docs,
        scientist_min_days=scientist_min_days,
    )
    return RankedList(out.items, f"explore[reading]: {stage1.provenance} -> {out.provenance}").truncated(k)


def explore(
    mode: str,
    corpus: Corpus,
    index: TextIndex,
    spec: QuerySpec,
    now: datetime,
    truncation: int = 200,
    k: int | None = None,
) -> RankedList:
    if mode == "reviews":
        return reviews_and_introductory(corpus, index, spec, now, truncation, k)
    if mode == "experts":
        return what_experts_cite(corpus, index, spec, now, truncation, k)
    if mode == "reading":
        return what_people_are_reading(corpus, index, spec, now, truncation, k)
    raise ValueError(f"unknown explore mode: {mode!r} (expected {'|'.join(EXPLORE_MODES)})")
