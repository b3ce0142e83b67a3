"""Per-document recommendations: the four user-directed buttons and the
eight-slot automated panel.

The buttons are the list operators applied to the one-document list, with two
sort overrides: References keeps the article's own reference-list order and
Citations orders citing papers newest first.

Every panel slot is an independent algorithm over the document's near list in
the reduced space; slots never return the document itself, and a slot with no
qualifying candidate is emitted empty with a reason rather than backfilled, so
each algorithm stays individually testable. Wire labels, in order:

    closest | coread_top | read_after | read_before | recent_hot |
    most_cited_by_near | cites_most_near | entity_overlap
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

from .config import Config
from .corpus import Corpus
from .errors import EmptyListError
from .listops import co_read, get_citation_lists, get_reference_lists, scientist_ids, similar_to_combination
from .ranking import RankedList, order_key, rank
from .textindex import TextIndex
from .vectorspace import SpaceModel, near_list

SLOT_LABELS = (
    "closest",
    "coread_top",
    "read_after",
    "read_before",
    "recent_hot",
    "most_cited_by_near",
    "cites_most_near",
    "entity_overlap",
)


@dataclass
class Slot:
    algorithm: str
    doc_id: str | None = None
    score: float | None = None
    reason: str | None = None  # set when the slot is empty


def buttons(
    corpus: Corpus,
    index: TextIndex,
    doc_id: str,
    now: datetime,
    k: int | None = 50,
    cfg: Config | None = None,
) -> dict[str, RankedList]:
    """References / Citations / Co-Read / Similar for one document."""
    cfg = cfg or Config()
    doc = corpus.require(doc_id)

    refs = [(r, 1.0) for r in corpus.known_references(doc_id)]  # document's own order
    references = RankedList(refs, f"references[{doc_id}] in article order")

    citers = sorted(corpus.citers(doc_id), key=lambda c: order_key(corpus, c, 0.0))
    citations = RankedList([(c, 1.0) for c in citers], f"citations[{doc_id}] newest first")

    coread = co_read(
        corpus,
        [doc_id],
        now,
        window_days=cfg.coread_window_days,
        scientists_only=True,
        scientist_window_days=cfg.scientist_window_days,
        scientist_min_docs=cfg.scientist_min_docs,
        scientist_min_days=cfg.scientist_min_days,
    )

    try:
        similar = similar_to_combination(corpus, index, [doc_id], k)
    except EmptyListError:
        similar = RankedList([], f"similar[{doc_id}] | document has no indexable text")

    return {"references": references, "citations": citations, "coread": coread, "similar": similar}


def _top_excluding(ranked: RankedList, exclude: str) -> tuple[str, float] | None:
    for doc_id, score in ranked.items:
        if doc_id != exclude:
            return doc_id, score
    return None


def _transition_counts(
    corpus: Corpus,
    readers: set[str],
    near_set: set[str],
    now: datetime,
    window_days: int,
    gap_hours: float,
    after: bool,
) -> dict[str, int]:
    """Count reads immediately adjacent to a near-list read.

    Two events of one reader are adjacent when consecutive in their in-window
    sequence and at most `gap_hours` apart (a session bound; adjacency across
    weeks would be meaningless). after=True counts (near -> candidate),
    otherwise (candidate -> near). Self-transitions are skipped.
    """
    start = now - timedelta(days=window_days)
    gap = timedelta(hours=gap_hours)
    counts: dict[str, int] = {}
    for reader in readers:
        events = [ev for ev in corpus.reader_events(reader) if start <= ev.timestamp < now]
        for first, second in zip(events, events[1:]):
            if second.timestamp - first.timestamp > gap:
                continue
            if first.doc_id == second.doc_id:
                continue
            if after and first.doc_id in near_set:
                counts[second.doc_id] = counts.get(second.doc_id, 0) + 1
            elif not after and second.doc_id in near_set:
                counts[first.doc_id] = counts.get(first.doc_id, 0) + 1
    return counts


def recommend_eight(
    corpus: Corpus,
    index: TextIndex,
    model: SpaceModel,
    doc_id: str,
    now: datetime,
    cfg: Config | None = None,
) -> list[Slot]:
    """The eight-algorithm panel for one document.

    Raises NotRecommendableError when the document has no features in the
    space (propagated from the near-list computation).
    """
    cfg = cfg or Config()
    corpus.require(doc_id)
    near = near_list(model, corpus, doc_id, size=cfg.near_list_size)
    near_ids = [d for d, _ in near.items]
    near_set = set(near_ids)
    slots: list[Slot] = []

    def emit(label: str, pick: tuple[str, float] | None, reason: str) -> None:
        if pick is None:
            slots.append(Slot(label, reason=reason))
        else:
            slots.append(Slot(label, doc_id=pick[0], score=float(pick[1])))

    # 1: nearest neighbor in the space
    emit("closest", near.items[0] if near.items else None, "near list is empty")

    if near_ids:
        coread_ranked = co_read(
            corpus,
            near_ids,
            now,
            window_days=cfg.coread_window_days,
            scientists_only=True,
            scientist_window_days=cfg.scientist_window_days,
            scientist_min_docs=cfg.scientist_min_docs,
            scientist_min_days=cfg.scientist_min_days,
        )
    else:
        coread_ranked = RankedList([], "coread[empty near list]")

    # 2: most co-read with the near list
    emit("coread_top", _top_excluding(coread_ranked, doc_id), "no qualifying co-read papers")

    # 3 and 4: session transitions around near-list reads, scientists only
    scientists = scientist_ids(
        corpus, now, cfg.scientist_window_days, cfg.scientist_min_docs, cfg.scientist_min_days
    )
    for label, after in (("read_after", True), ("read_before", False)):
        counts = _transition_counts(
            corpus, scientists, near_set, now, cfg.coread_window_days, cfg.session_gap_hours, after
        )
        counts.pop(doc_id, None)
        ranked = rank(corpus, counts, label)
        emit(label, ranked.items[0] if ranked.items else None, "no adjacent reads observed")

    # 5: newest among the most-read co-read papers
    pool = [(d, s) for d, s in coread_ranked.items[: cfg.recent_hot_pool] if d != doc_id]
    if pool:
        newest = min(pool, key=lambda it: order_key(corpus, it[0], 0.0))
        emit("recent_hot", (newest[0], float(corpus.docs[newest[0]].pub_date.toordinal())), "")
    else:
        emit("recent_hot", None, "no qualifying co-read papers")

    # 6: paper the near list cites most
    try:
        refs = get_reference_lists(corpus, near_ids) if near_ids else RankedList([], "empty")
    except EmptyListError:
        refs = RankedList([], "empty")
    emit("most_cited_by_near", _top_excluding(refs, doc_id), "near list cites nothing known")

    # 7: paper citing the most of the near list
    try:
        cites = get_citation_lists(corpus, near_ids) if near_ids else RankedList([], "empty")
    except EmptyListError:
        cites = RankedList([], "empty")
    emit("cites_most_near", _top_excluding(cites, doc_id), "nothing cites the near list")

    # 8: shared named-entity mentions (distinct entities, however many near
    # papers share each one)
    union_entities: set[str] = set()
    for nid in near_ids:
        union_entities |= corpus.docs[nid].entities
    overlap: dict[str, int] = {}
    for cand_id, cand in corpus.docs.items():
        if cand_id == doc_id:
            continue
        common = len(cand.entities & union_entities)
        if common > 0:
            overlap[cand_id] = common
    ranked = rank(corpus, overlap, "entity_overlap")
    emit("entity_overlap", ranked.items[0] if ranked.items else None, "no shared named entities")

    assert [s.algorithm for s in slots] == list(SLOT_LABELS)
    return slots
