"""Fielded query parsing, filtered retrieval under the four sort modes,
the composite relevance score, facet summaries, and list refinement/editing.

Grammar: bare tokens and "quoted phrases" are text terms; `author:"Name"`,
`year:A-B`, `journal:X`, `refereed:true|false`, `keyword:X`, `entity:X` set
filters. Sort is supplied out of band (UI toggle / CLI flag / query param)
and is one of recent | relevant | cited | popular.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timedelta

from .config import RelevanceWeights
from .corpus import Corpus, Document, authors_match
from .errors import ParseError
from .ranking import RankedList, rank
from .textindex import MatchEvidence, QueryTerm, TextIndex, cosine, tokenize

SORT_MODES = ("recent", "relevant", "cited", "popular")

_TOKEN = re.compile(
    r'(?P<tagq>[A-Za-z_]+):"(?P<tagqval>[^"]*)"'
    r'|(?P<tag>[A-Za-z_]+):(?P<tagval>[^\s"]+)'
    r'|"(?P<phrase>[^"]*)"'
    r"|(?P<word>[^\s\"]+)"
)
_FILTER_TAGS = ("author", "year", "journal", "refereed", "keyword", "entity")


@dataclass(frozen=True)
class QuerySpec:
    terms: tuple[QueryTerm, ...] = ()
    author: str | None = None
    date_from: date | None = None
    date_to: date | None = None
    refereed: bool | None = None
    journals: frozenset[str] = frozenset()
    entities: frozenset[str] = frozenset()
    keywords: frozenset[str] = frozenset()
    sort: str = "recent"

    def describe(self) -> str:
        bits = [t.label() for t in self.terms]
        if self.author:
            bits.append(f'author:"{self.author}"')
        if self.date_from or self.date_to:
            bits.append(f"year:{self.date_from and self.date_from.year}-{self.date_to and self.date_to.year}")
        if self.refereed is not None:
            bits.append(f"refereed:{str(self.refereed).lower()}")
        bits += [f"journal:{j}" for j in sorted(self.journals)]
        bits += [f"entity:{e}" for e in sorted(self.entities)]
        bits += [f"keyword:{k}" for k in sorted(self.keywords)]
        return f"search[{' '.join(bits)} sort={self.sort}]"


def parse_query(raw: str, index: TextIndex, sort: str = "recent") -> QuerySpec:
    """Parse the fielded grammar. Unknown tags and unbalanced quotes are errors."""
    if sort not in SORT_MODES:
        raise ParseError(f"unknown sort mode: {sort!r} (expected one of {'|'.join(SORT_MODES)})")
    if raw.count('"') % 2 != 0:
        raise ParseError(f"unbalanced quote at position {raw.rfind(chr(34))}")
    terms: list[QueryTerm] = []
    author = None
    date_from = date_to = None
    refereed = None
    journals: set[str] = set()
    entities: set[str] = set()
    keywords: set[str] = set()

    def tokenizer(text: str) -> tuple[str, ...]:
        return tuple(tokenize(text, index.synonyms, index.stopwords))

    for m in _TOKEN.finditer(raw):
        tag = m.group("tagq") or m.group("tag")
        if tag is not None:
            value = m.group("tagqval") if m.group("tagq") else m.group("tagval")
            tag = tag.lower()
            if tag not in _FILTER_TAGS:
                raise ParseError(f"unknown query field: {tag!r}")
            if tag == "author":
                author = value
            elif tag == "year":
                date_from, date_to = _parse_year_range(value)
            elif tag == "journal":
                journals.add(value)
            elif tag == "refereed":
                if value.lower() not in ("true", "false"):
                    raise ParseError(f"refereed filter takes true|false, got {value!r}")
                refereed = value.lower() == "true"
            elif tag == "keyword":
                keywords.add(value)
            elif tag == "entity":
                entities.add(value)
            continue
        if m.group("phrase") is not None:
            toks = tokenizer(m.group("phrase"))
            if toks:
                terms.append(QueryTerm(toks, phrase=True))
            continue
        toks = tokenizer(m.group("word"))
        for tok in toks:
            terms.append(QueryTerm((tok,), phrase=False))

    spec = QuerySpec(
        terms=tuple(terms),
        author=author,
        date_from=date_from,
        date_to=date_to,
        refereed=refereed,
        journals=frozenset(journals),
        entities=frozenset(entities),
        keywords=frozenset(keywords),
        sort=sort,
    )
    if not (spec.terms or spec.author or spec.entities or spec.keywords):
        if not raw.strip():
            raise ParseError("empty query")
        raise ParseError(
            "query needs at least one text term or an author/entity/keyword filter"
        )
    return spec


def _parse_year_range(value: str) -> tuple[date, date]:
    m = re.fullmatch(r"(\d{4})(?:-(\d{4}))?", value)
    if not m:
        raise ParseError(f"year filter takes YYYY or YYYY-YYYY, got {value!r}")
    y0 = int(m.group(1))
    y1 = int(m.group(2)) if m.group(2) else y0
    if y1 < y0:
        raise ParseError(f"year range is backwards: {value}")
    return date(y0, 1, 1), date(y1, 12, 31)


def _passes_filters(doc: Document, spec: QuerySpec) -> bool:
    if spec.author is not None and not any(authors_match(spec.author, a) for a in doc.authors):
        return False
    if spec.date_from is not None and doc.pub_date < spec.date_from:
        return False
    if spec.date_to is not None and doc.pub_date > spec.date_to:
        return False
    if spec.refereed is not None and doc.refereed != spec.refereed:
        return False
    if spec.journals and doc.journal not in spec.journals:
        return False
    if spec.entities and not spec.entities <= doc.entities:
        return False
    if spec.keywords and not spec.keywords <= doc.keywords:
        return False
    return True


def candidate_set(corpus: Corpus, index: TextIndex, spec: QuerySpec) -> dict[str, MatchEvidence]:
    if spec.terms:
        hits = index.search(list(spec.terms))
    else:
        hits = {doc_id: {} for doc_id in corpus.docs}
    return {d: ev for d, ev in hits.items() if _passes_filters(corpus.docs[d], spec)}


def matched_author_rank(doc: Document, author_filter: str) -> int | None:
    """1-based position of the first author matching the filter, if any."""
    for pos, name in enumerate(doc.authors, start=1):
        if authors_match(author_filter, name):
            return pos
    return None


def relevance_score(
    doc: Document,
    spec: QuerySpec,
    corpus: Corpus,
    index: TextIndex,
    now: datetime,
    *,
    cite_max: int,
    reads: int,
    reads_max: int,
    weights: RelevanceWeights = RelevanceWeights(),
) -> float:
    """Composite relevance: text, recency, citations, readership, author rank.

    Citation and readership components are normalized against the maxima in
    the current result set, so the score is only meaningful within one set.
    When no author filter matched, its weight is spread over the other four.
    """
    query_vec = index.query_vector(spec.terms)
    text = cosine(query_vec, index.doc_vector(doc.id))

    age_years = max(0.0, (now.date() - doc.pub_date).days / 365.25)
    recency = math.exp(-age_years / 5.0)

    cited = 0.0
    if cite_max > 0:
        cited = math.log(1 + corpus.citation_count(doc.id)) / math.log(1 + cite_max)
    read_part = 0.0
    if reads_max > 0:
        read_part = math.log(1 + reads) / math.log(1 + reads_max)

    core = (
        weights.text * text
        + weights.recency * recency
        + weights.cited * cited
        + weights.reads * read_part
    )
    if spec.author is not None:
        pos = matched_author_rank(doc, spec.author)
        author_part = 1.0 / pos if pos else 0.0
        return core + weights.author_pos * author_part
    total_core = weights.text + weights.recency + weights.cited + weights.reads
    return core / total_core * (total_core + weights.author_pos)


def run_query(
    corpus: Corpus,
    index: TextIndex,
    spec: QuerySpec,
    now: datetime,
    *,
    popular_window_days: int = 90,
    weights: RelevanceWeights = RelevanceWeights(),
) -> RankedList:
    """First-order query: match, filter, and sort by the requested mode.

    The score column carries the sort key: publication-date ordinal for
    recent, citation count for cited, distinct recent readers for popular,
    and the composite relevance score for relevant.
    """
    candidates = candidate_set(corpus, index, spec)
    provenance = spec.describe()

    if spec.sort == "recent":
        scored = {d: float(corpus.docs[d].pub_date.toordinal()) for d in candidates}
    elif spec.sort == "cited":
        scored = {d: float(corpus.citation_count(d)) for d in candidates}
    elif spec.sort == "popular":
        counts = corpus.popular_counts(candidates, now, popular_window_days)
        scored = {d: float(c) for d, c in counts.items()}
    elif spec.sort == "relevant":
        counts = corpus.popular_counts(candidates, now, popular_window_days)
        cite_max = max((corpus.citation_count(d) for d in candidates), default=0)
        reads_max = max(counts.values(), default=0)
        scored = {
            d: relevance_score(
                corpus.docs[d],
                spec,
                corpus,
                index,
                now,
                cite_max=cite_max,
                reads=counts[d],
                reads_max=reads_max,
                weights=weights,
            )
            for d in candidates
        }
    else:
        raise ParseError(f"unknown sort mode: {spec.sort!r}")
    return rank(corpus, scored, provenance)


# ---------------------------------------------------------------------------
# facets

FACET_DIMENSIONS = ("author", "journal", "year", "refereed", "keyword", "entity")


@dataclass
class FacetSummary:
    by_dim: dict[str, list[tuple[str, int]]] = field(default_factory=dict)


def _doc_facet_values(doc: Document, dim: str) -> list[str]:
    if dim == "author":
        return list(doc.authors)
    if dim == "journal":
        return [doc.journal] if doc.journal else []
    if dim == "year":
        return [str(doc.pub_date.year)]
    if dim == "refereed":
        return ["true" if doc.refereed else "false"]
    if dim == "keyword":
        return sorted(doc.keywords)
    if dim == "entity":
        return sorted(doc.entities)
    raise ValueError(dim)


def facets(
    corpus: Corpus,
    ranked: RankedList,
    context: str,
    now: datetime | None = None,
    popular_window_days: int = 90,
) -> FacetSummary:
    """Value/count summaries over the list, ordered by a context metric.

    Under recent and relevant every dimension orders by count; under cited the
    author and journal facets order by the summed citation counts of their
    documents, and under popular by their summed recent reads. The year facet
    is always chronological.
    """
    docs = [corpus.docs[d] for d, _ in ranked.items]
    reads: dict[str, int] = {}
    if context == "popular":
        if now is None:
            raise ValueError("popular facet ordering needs `now`")
        reads = corpus.popular_counts([d.id for d in docs], now, popular_window_days)

    summary = FacetSummary()
    for dim in FACET_DIMENSIONS:
        counts: dict[str, int] = {}
        metric: dict[str, float] = {}
        for doc in docs:
            for value in _doc_facet_values(doc, dim):
                counts[value] = counts.get(value, 0) + 1
                if dim in ("author", "journal"):
                    if context == "cited":
                        metric[value] = metric.get(value, 0.0) + corpus.citation_count(doc.id)
                    elif context == "popular":
                        metric[value] = metric.get(value, 0.0) + reads[doc.id]
        if dim == "year":
            ordered = sorted(counts.items(), key=lambda vc: int(vc[0]))
        elif dim in ("author", "journal") and context in ("cited", "popular"):
            ordered = sorted(counts.items(), key=lambda vc: (-metric.get(vc[0], 0.0), vc[0]))
        else:
            ordered = sorted(counts.items(), key=lambda vc: (-vc[1], vc[0]))
        summary.by_dim[dim] = ordered
    return summary


# ---------------------------------------------------------------------------
# list refinement and editing


@dataclass(frozen=True)
class ListFilter:
    author: str | None = None
    refereed: bool | None = None
    journals: frozenset[str] = frozenset()
    entities: frozenset[str] = frozenset()
    keywords: frozenset[str] = frozenset()
    date_from: date | None = None
    date_to: date | None = None

    def describe(self) -> str:
        bits = []
        if self.author:
            bits.append(f'author:"{self.author}"')
        if self.refereed is not None:
            bits.append(f"refereed:{str(self.refereed).lower()}")
        bits += [f"journal:{j}" for j in sorted(self.journals)]
        bits += [f"entity:{e}" for e in sorted(self.entities)]
        bits += [f"keyword:{k}" for k in sorted(self.keywords)]
        if self.date_from:
            bits.append(f"from:{self.date_from.isoformat()}")
        if self.date_to:
            bits.append(f"to:{self.date_to.isoformat()}")
        return " ".join(bits) or "(none)"

    def as_spec_filters(self) -> dict:
        return {
            "author": self.author,
            "refereed": self.refereed,
            "journals": self.journals,
            "entities": self.entities,
            "keywords": self.keywords,
            "date_from": self.date_from,
            "date_to": self.date_to,
        }


def refine(corpus: Corpus, ranked: RankedList, flt: ListFilter) -> RankedList:
    """Keep only list members passing the filter; survivor order is preserved."""
    probe = QuerySpec(terms=(), sort="recent", **flt.as_spec_filters())
    items = [(d, s) for d, s in ranked.items if _passes_filters(corpus.docs[d], probe)]
    return RankedList(items, f"{ranked.provenance} | refine[{flt.describe()}]")


def edit(
    corpus: Corpus,
    ranked: RankedList,
    remove: tuple[str, ...] = (),
    keep_top: int | None = None,
    max_age_days: int | None = None,
    now: datetime | None = None,
) -> RankedList:
    """User edits: drop ids, keep the top k, or truncate by document age."""
    notes = []
    items = list(ranked.items)
    if remove:
        present = {d for d, _ in items}
        missing = [r for r in remove if r not in present]
        items = [(d, s) for d, s in items if d not in set(remove)]
        note = f"remove {len(remove) - len(missing)}"
        if missing:
            note += f" ({len(missing)} not in list)"
        notes.append(note)
    if max_age_days is not None:
        if now is None:
            raise ValueError("age truncation needs `now`")
        cutoff = now.date()
        items = [
            (d, s) for d, s in items if (cutoff - corpus.docs[d].pub_date).days < max_age_days
        ]
        notes.append(f"newer than {max_age_days}d")
    if keep_top is not None:
        items = items[:keep_top]
        notes.append(f"keep top {keep_top}")
    return RankedList(items, f"{ranked.provenance} | edit[{'; '.join(notes) or 'no-op'}]")


def spec_with_sort(spec: QuerySpec, sort: str) -> QuerySpec:
    return replace(spec, sort=sort)
