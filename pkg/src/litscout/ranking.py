"""RankedList: the universal currency every operator consumes and produces.

An ordered list of (doc id, score) pairs plus a human-readable provenance
string, so any list can explain which operations and parameters produced it.
Ties are broken the same way everywhere: publication date descending, then id
ascending, giving every operation a total, reproducible order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping

if TYPE_CHECKING:
    from .corpus import Corpus


@dataclass
class RankedList:
    items: list[tuple[str, float]] = field(default_factory=list)
    provenance: str = ""

    def ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.items]

    def scores(self) -> dict[str, float]:
        return dict(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, doc_id: str) -> bool:
        return any(doc_id == d for d, _ in self.items)

    def truncated(self, k: int | None, note: str | None = None) -> "RankedList":
        if k is None or k >= len(self.items):
            return RankedList(list(self.items), self.provenance if note is None else f"{self.provenance} | {note}")
        prov = self.provenance + (f" | {note}" if note else f" | top {k} of {len(self.items)}")
        return RankedList(self.items[:k], prov)

    def with_note(self, note: str) -> "RankedList":
        return RankedList(list(self.items), f"{self.provenance} | {note}")

    def validate(self) -> None:
        """Check the structural invariants; used by tests, not hot paths."""
        assert self.provenance, "every ranked list must explain itself"
        seen = set()
        for doc_id, _ in self.items:
            assert doc_id not in seen, f"duplicate id {doc_id}"
            seen.add(doc_id)
        for (_, a), (_, b) in zip(self.items, self.items[1:]):
            assert a >= b, "scores must be non-increasing"


def order_key(corpus: "Corpus", doc_id: str, score: float) -> tuple:
    doc = corpus.docs[doc_id]
    return (-score, -doc.pub_date.toordinal(), doc_id)


def rank(
    corpus: "Corpus",
    scored: Mapping[str, float] | Iterable[tuple[str, float]],
    provenance: str,
    exclude: frozenset[str] | set[str] = frozenset(),
) -> RankedList:
    """Order scored docs by score desc, pub date desc, id asc."""
    pairs = scored.items() if isinstance(scored, Mapping) else scored
    kept = [(d, float(s)) for d, s in pairs if d not in exclude]
    kept.sort(key=lambda it: order_key(corpus, it[0], it[1]))
    return RankedList(kept, provenance)
