"""Tokenization, synonym canonicalization, weighted term vectors, and the
positional inverted index behind text search and the similarity operators.

Term weighting is sublinear TF-IDF with per-field boosts: an occurrence in the
title counts triple and in the abstract double relative to the body,

    w(t, d) = idf(t) * sum_f boost_f * (1 + ln count(t, d, f))    over fields with count > 0
    idf(t)  = ln(N / df(t))

and vectors are L2-normalized, so similarity is plain cosine. Positions index
the canonical token stream of each field (after stopword removal and synonym
mapping), which is also what quoted-phrase adjacency is measured against.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

from .config import default_stopwords, default_synonyms_text
from .corpus import Corpus, Document

FIELDS = ("title", "abstract", "body")
FIELD_BOOSTS = {"title": 3.0, "abstract": 2.0, "body": 1.0}

_WORD = re.compile(r"[a-z0-9]+")

TermVector = dict[str, float]


class SynonymTable:
    """token -> canonical token(s); flattened at load so mapping is idempotent.

    A canonical value may contain spaces ("weaklensing" -> "weak lensing"), in
    which case the variant expands to several tokens.
    """

    def __init__(self, mapping: dict[str, str] | None = None):
        self.canonical: dict[str, str] = {}
        if mapping:
            self.canonical = dict(mapping)
            self._flatten()

    @classmethod
    def from_text(cls, text: str) -> "SynonymTable":
        mapping = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            variant, sep, canon = line.partition("\t")
            if not sep:
                continue
            mapping[variant.strip().lower()] = canon.strip().lower()
        return cls(mapping)

    @classmethod
    def load(cls, path: str | None) -> "SynonymTable":
        if path is None:
            return cls.from_text(default_synonyms_text())
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def _flatten(self) -> None:
        def resolve(token: str, seen: set[str]) -> str:
            target = self.canonical.get(token)
            if target is None or token in seen:
                return token
            seen.add(token)
            # multiword canonicals resolve part by part
            parts = [resolve(p, seen) for p in target.split()]
            return " ".join(parts)

        self.canonical = {tok: resolve(tok, set()) for tok in self.canonical}

    def canon(self, token: str) -> str:
        return self.canonical.get(token, token)


def tokenize(text: str, synonyms: SynonymTable, stopwords: set[str]) -> list[str]:
    """Lowercase, strip punctuation, drop stopwords, canonicalize; order kept."""
    out: list[str] = []
    for raw in _WORD.findall(text.lower()):
        if raw in stopwords:
            continue
        for part in synonyms.canon(raw).split():
            if part not in stopwords:
                out.append(part)
    return out


def cosine(a: TermVector, b: TermVector) -> float:
    """Cosine similarity in [0, 1]; 0 when either vector is empty."""
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(w * b[t] for t, w in a.items() if t in b)
    na = math.sqrt(sum(w * w for w in a.values()))
    nb = math.sqrt(sum(w * w for w in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, dot / (na * nb))


@dataclass(frozen=True)
class QueryTerm:
    """One conjunctive unit of a parsed query: a token or a quoted phrase."""

    tokens: tuple[str, ...]
    phrase: bool = False

    def label(self) -> str:
        text = " ".join(self.tokens)
        return f'"{text}"' if self.phrase else text


MatchEvidence = dict[str, int]  # field -> number of query units matched there


class TextIndex:
    """Positional inverted index plus precomputed normalized doc vectors.

    Built once per corpus and immutable afterwards; concurrent read-only
    queries are safe.
    """

    def __init__(
        self,
        corpus: Corpus,
        synonyms: SynonymTable | None = None,
        stopwords: set[str] | None = None,
    ):
        self.corpus = corpus
        self.synonyms = synonyms if synonyms is not None else SynonymTable.load(None)
        self.stopwords = stopwords if stopwords is not None else default_stopwords()

        # postings[term][doc_id][field] = sorted positions in that field's token stream
        self.postings: dict[str, dict[str, dict[str, list[int]]]] = {}
        self.term_counts: dict[str, int] = {}
        self._field_tokens: dict[str, dict[str, list[str]]] = {}

        for doc in corpus.docs.values():
            per_field: dict[str, list[str]] = {}
            for fname in FIELDS:
                text = getattr(doc, fname) or ""
                toks = tokenize(text, self.synonyms, self.stopwords)
                per_field[fname] = toks
                for pos, tok in enumerate(toks):
                    self.postings.setdefault(tok, {}).setdefault(doc.id, {}).setdefault(fname, []).append(pos)
                    self.term_counts[tok] = self.term_counts.get(tok, 0) + 1
            self._field_tokens[doc.id] = per_field

        self.df: dict[str, int] = {t: len(docs) for t, docs in self.postings.items()}
        self._n = len(corpus)
        self._vectors: dict[str, TermVector] = {d: self._build_vector(d) for d in corpus.docs}

    # -- vectors -------------------------------------------------------------

    def idf(self, term: str) -> float:
        df = self.df.get(term, 0)
        if df == 0 or self._n == 0:
            return 0.0
        return math.log(self._n / df)

    def _build_vector(self, doc_id: str) -> TermVector:
        weights: TermVector = {}
        for fname, toks in self._field_tokens[doc_id].items():
            if not toks:
                continue
            boost = FIELD_BOOSTS[fname]
            counts: dict[str, int] = {}
            for tok in toks:
                counts[tok] = counts.get(tok, 0) + 1
            for tok, c in counts.items():
                weights[tok] = weights.get(tok, 0.0) + boost * (1.0 + math.log(c))
        out: TermVector = {}
        for tok, tf in weights.items():
            w = tf * self.idf(tok)
            if w > 0.0:
                out[tok] = w
        norm = math.sqrt(sum(w * w for w in out.values()))
        if norm == 0.0:
            return {}
        return {t: w / norm for t, w in out.items()}

    def doc_vector(self, doc_id: str) -> TermVector:
        return self._vectors[doc_id]

    def query_vector(self, terms: Iterable[QueryTerm]) -> TermVector:
        weights: TermVector = {}
        for term in terms:
            for tok in term.tokens:
                w = self.idf(tok)
                if w > 0.0:
                    weights[tok] = w  # repeated query tokens do not double-count
        norm = math.sqrt(sum(w * w for w in weights.values()))
        if norm == 0.0:
            return {}
        return {t: w / norm for t, w in weights.items()}

    # -- search ----------------------------------------------------------------

    def _docs_with_phrase(self, tokens: tuple[str, ...]) -> dict[str, set[str]]:
        """Docs containing the tokens at adjacent positions within one field."""
        first = self.postings.get(tokens[0], {})
        hits: dict[str, set[str]] = {}
        for doc_id, by_field in first.items():
            fields: set[str] = set()
            for fname, starts in by_field.items():
                later = []
                for offset, tok in enumerate(tokens[1:], start=1):
                    positions = self.postings.get(tok, {}).get(doc_id, {}).get(fname)
                    if positions is None:
                        later = None
                        break
                    later.append((offset, set(positions)))
                if later is None:
                    continue
                if any(all(p + off in poss for off, poss in later) for p in starts):
                    fields.add(fname)
            if fields:
                hits[doc_id] = fields
        return hits

    def _docs_with_token(self, token: str) -> dict[str, set[str]]:
        return {doc_id: set(by_field) for doc_id, by_field in self.postings.get(token, {}).items()}

    def search(self, terms: list[QueryTerm]) -> dict[str, MatchEvidence]:
        """Conjunctive match: every term (and phrase, adjacently) must occur.

        Returns doc id -> per-field count of query units matched there.
        """
        if not terms:
            return {}
        result: dict[str, MatchEvidence] | None = None
        for term in terms:
            if term.phrase and len(term.tokens) > 1:
                found = self._docs_with_phrase(term.tokens)
            elif len(term.tokens) == 1:
                found = self._docs_with_token(term.tokens[0])
            else:  # multi-token non-phrase: all tokens anywhere in the doc
                found = None
                for tok in term.tokens:
                    tok_hits = self._docs_with_token(tok)
                    if found is None:
                        found = tok_hits
                    else:
                        found = {
                            d: fields | tok_hits[d] for d, fields in found.items() if d in tok_hits
                        }
                found = found or {}
            if result is None:
                result = {d: {f: 1 for f in fields} for d, fields in found.items()}
            else:
                merged: dict[str, MatchEvidence] = {}
                for doc_id, evidence in result.items():
                    fields = found.get(doc_id)
                    if fields is None:
                        continue
                    ev = dict(evidence)
                    for f in fields:
                        ev[f] = ev.get(f, 0) + 1
                    merged[doc_id] = ev
                result = merged
            if not result:
                return {}
        return result or {}

    # -- auto-complete -----------------------------------------------------------

    def complete(self, prefix: str, limit: int = 10) -> list[tuple[str, int]]:
        """Indexed terms starting with the prefix, most frequent first."""
        p = prefix.strip().lower()
        if not p:
            return []
        matches = [(t, c) for t, c in self.term_counts.items() if t.startswith(p)]
        matches.sort(key=lambda tc: (-tc[1], tc[0]))
        return matches[:limit]


def similarity(a: TermVector, b: TermVector) -> float:
    """Text similarity between two term vectors (cosine, in [0, 1])."""
    return cosine(a, b)


def doc_text_fields(doc: Document) -> dict[str, str]:
    return {f: (getattr(doc, f) or "") for f in FIELDS}
