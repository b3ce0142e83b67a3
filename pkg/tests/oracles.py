"""Independent brute-force oracles and synthetic corpus generators.

Everything here recomputes results from first principles (linear scans over
documents and events, dense linear algebra) and deliberately avoids the
engine's index/graph code paths, so agreement is meaningful. The only shared
ingredient is the tokenizer, whose behavior is pinned by hand-computed tests.
"""
from __future__ import annotations

import json
import math
import random
import weakref
from datetime import date, datetime, timedelta, timezone

import numpy as np

from litscout.corpus import Corpus, authors_match
from litscout.textindex import FIELD_BOOSTS, FIELDS, tokenize

NOW = datetime(2024, 7, 1, 12, 0, 0, tzinfo=timezone.utc)

# Tokenized fields, document frequencies, and brute-force vectors are pure
# functions of the corpus; caching them keeps the O(n^2) oracles usable on the
# acceptance-sized corpora without touching the engine's index.
_text_cache: "weakref.WeakKeyDictionary[Corpus, dict]" = weakref.WeakKeyDictionary()


def _text_ctx(corpus: Corpus, index) -> dict:
    ctx = _text_cache.get(corpus)
    if ctx is not None:
        return ctx
    tokens = {
        doc.id: {f: tokenize(getattr(doc, f) or "", index.synonyms, index.stopwords) for f in FIELDS}
        for doc in corpus.docs.values()
    }
    df: dict[str, int] = {}
    for fields in tokens.values():
        present = {t for toks in fields.values() for t in toks}
        for t in present:
            df[t] = df.get(t, 0) + 1
    n = len(corpus.docs)
    vectors = {}
    for doc_id, fields in tokens.items():
        weights: dict[str, float] = {}
        for fname, toks in fields.items():
            for t in set(toks):
                c = toks.count(t)
                weights[t] = weights.get(t, 0.0) + FIELD_BOOSTS[fname] * (1.0 + math.log(c))
        vec = {}
        for t, tf in weights.items():
            idf = math.log(n / df[t]) if df.get(t) else 0.0
            if tf * idf > 0:
                vec[t] = tf * idf
        norm = math.sqrt(sum(w * w for w in vec.values()))
        vectors[doc_id] = {t: w / norm for t, w in vec.items()} if norm else {}
    ctx = {"tokens": tokens, "df": df, "n": n, "vectors": vectors}
    _text_cache[corpus] = ctx
    return ctx


def order(corpus: Corpus, scored: dict[str, float]) -> list[tuple[str, float]]:
    """The engine-wide tie-break, restated: score desc, pub date desc, id asc."""
    return sorted(
        ((d, float(s)) for d, s in scored.items()),
        key=lambda it: (-it[1], -corpus.docs[it[0]].pub_date.toordinal(), it[0]),
    )


# ---------------------------------------------------------------------------
# citation graph


def oracle_cited_by(corpus: Corpus) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for doc in corpus.docs.values():
        for ref in doc.references:
            if ref in corpus.docs:
                out.setdefault(ref, set()).add(doc.id)
    return out


def oracle_citation_count(corpus: Corpus, doc_id: str) -> int:
    return sum(1 for d in corpus.docs.values() if doc_id in d.references)


# ---------------------------------------------------------------------------
# readership


def window_events(corpus: Corpus, now: datetime, days: int):
    start = now - timedelta(days=days)
    return [ev for ev in corpus.events if start <= ev.timestamp < now]


def oracle_reads(corpus: Corpus, doc_id: str, now: datetime, days: int) -> int:
    return len({ev.reader_id for ev in window_events(corpus, now, days) if ev.doc_id == doc_id})


def oracle_scientists(
    corpus: Corpus, now: datetime, window_days=180, min_docs=10, min_days=5
) -> set[str]:
    per_reader: dict[str, tuple[set, set]] = {}
    for ev in window_events(corpus, now, window_days):
        docs, days = per_reader.setdefault(ev.reader_id, (set(), set()))
        docs.add(ev.doc_id)
        days.add(ev.timestamp.date())
    return {
        r for r, (docs, days) in per_reader.items() if len(docs) >= min_docs and len(days) >= min_days
    }


# ---------------------------------------------------------------------------
# text: independent TF-IDF and scan search


def oracle_field_tokens(corpus: Corpus, index) -> dict[str, dict[str, list[str]]]:
    return _text_ctx(corpus, index)["tokens"]


def oracle_doc_vector(corpus: Corpus, index, doc_id: str) -> dict[str, float]:
    return _text_ctx(corpus, index)["vectors"][doc_id]


def oracle_cosine(a: dict[str, float], b: dict[str, float]) -> float:
    dot = sum(w * b.get(t, 0.0) for t, w in a.items())
    na = math.sqrt(sum(w * w for w in a.values()))
    nb = math.sqrt(sum(w * w for w in b.values()))
    return dot / (na * nb) if na and nb else 0.0


def oracle_scan_search(corpus: Corpus, index, terms) -> set[str]:
    """Per-document linear scan honoring conjunction and phrase adjacency."""
    tokens = oracle_field_tokens(corpus, index)
    hits = set()
    for doc_id, fields in tokens.items():
        ok = True
        for term in terms:
            matched = False
            for toks in fields.values():
                if term.phrase and len(term.tokens) > 1:
                    seq = list(term.tokens)
                    for i in range(len(toks) - len(seq) + 1):
                        if toks[i : i + len(seq)] == seq:
                            matched = True
                            break
                else:
                    if all(t in toks for t in term.tokens):
                        matched = True
                if matched:
                    break
            if not matched:
                ok = False
                break
        if ok:
            hits.add(doc_id)
    return hits


def oracle_filter(corpus: Corpus, ids, spec) -> set[str]:
    out = set()
    for doc_id in ids:
        doc = corpus.docs[doc_id]
        if spec.author is not None and not any(authors_match(spec.author, a) for a in doc.authors):
            continue
        if spec.date_from and doc.pub_date < spec.date_from:
            continue
        if spec.date_to and doc.pub_date > spec.date_to:
            continue
        if spec.refereed is not None and doc.refereed != spec.refereed:
            continue
        if spec.journals and doc.journal not in spec.journals:
            continue
        if spec.entities and not spec.entities <= doc.entities:
            continue
        if spec.keywords and not spec.keywords <= doc.keywords:
            continue
        out.add(doc_id)
    return out


def oracle_run_query(corpus: Corpus, index, spec, now: datetime) -> list[tuple[str, float]]:
    if spec.terms:
        ids = oracle_scan_search(corpus, index, list(spec.terms))
    else:
        ids = set(corpus.docs)
    ids = oracle_filter(corpus, ids, spec)
    if spec.sort == "recent":
        scored = {d: float(corpus.docs[d].pub_date.toordinal()) for d in ids}
    elif spec.sort == "cited":
        scored = {d: float(oracle_citation_count(corpus, d)) for d in ids}
    elif spec.sort == "popular":
        scored = {d: float(oracle_reads(corpus, d, now, 90)) for d in ids}
    elif spec.sort == "relevant":
        cites = {d: oracle_citation_count(corpus, d) for d in ids}
        reads = {d: oracle_reads(corpus, d, now, 90) for d in ids}
        cite_max = max(cites.values(), default=0)
        reads_max = max(reads.values(), default=0)
        scored = {
            d: _relevance_parts(
                corpus, index, spec, d, cites[d], cite_max, reads[d], reads_max, now
            )
            for d in ids
        }
    else:
        raise ValueError(spec.sort)
    return order(corpus, scored)


def _relevance_parts(
    corpus, index, spec, doc_id, cite, cite_max, read, reads_max, now
) -> float:
    doc = corpus.docs[doc_id]
    ctx = _text_ctx(corpus, index)
    qtokens = {t for term in spec.terms for t in term.tokens}
    qvec = {}
    for t in qtokens:
        if ctx["df"].get(t):
            idf = math.log(ctx["n"] / ctx["df"][t])
            if idf > 0:
                qvec[t] = idf
    text = oracle_cosine(qvec, ctx["vectors"][doc_id])

    age_years = max(0.0, (now.date() - doc.pub_date).days / 365.25)
    recency = math.exp(-age_years / 5.0)

    cited = math.log(1 + cite) / math.log(1 + cite_max) if cite_max else 0.0
    reads = math.log(1 + read) / math.log(1 + reads_max) if reads_max else 0.0
    core = 0.35 * text + 0.20 * recency + 0.20 * cited + 0.15 * reads
    if spec.author is not None:
        pos = None
        for i, name in enumerate(doc.authors, start=1):
            if authors_match(spec.author, name):
                pos = i
                break
        return core + 0.10 * (1.0 / pos if pos else 0.0)
    return core / 0.90


def oracle_relevance(corpus: Corpus, index, spec, doc_id: str, result_ids, now: datetime) -> float:
    cite_max = max((oracle_citation_count(corpus, d) for d in result_ids), default=0)
    reads_max = max((oracle_reads(corpus, d, now, 90) for d in result_ids), default=0)
    return _relevance_parts(
        corpus,
        index,
        spec,
        doc_id,
        oracle_citation_count(corpus, doc_id),
        cite_max,
        oracle_reads(corpus, doc_id, now, 90),
        reads_max,
        now,
    )


def oracle_facet_counts(corpus: Corpus, ids) -> dict[str, dict[str, int]]:
    out: dict[str, dict[str, int]] = {
        dim: {} for dim in ("author", "journal", "year", "refereed", "keyword", "entity")
    }
    for doc_id in ids:
        doc = corpus.docs[doc_id]
        values = {
            "author": list(doc.authors),
            "journal": [doc.journal] if doc.journal else [],
            "year": [str(doc.pub_date.year)],
            "refereed": ["true" if doc.refereed else "false"],
            "keyword": sorted(doc.keywords),
            "entity": sorted(doc.entities),
        }
        for dim, vals in values.items():
            for v in vals:
                out[dim][v] = out[dim].get(v, 0) + 1
    return out


# ---------------------------------------------------------------------------
# list operators


def oracle_reference_lists(corpus: Corpus, ids) -> list[tuple[str, float]]:
    scores: dict[str, float] = {}
    for doc_id in set(ids):
        seen = set()
        for ref in corpus.docs[doc_id].references:
            if ref in corpus.docs and ref not in seen:
                seen.add(ref)
                scores[ref] = scores.get(ref, 0) + 1
    return order(corpus, scores)


def oracle_citation_lists(corpus: Corpus, ids) -> list[tuple[str, float]]:
    wanted = set(ids)
    scores: dict[str, float] = {}
    for doc in corpus.docs.values():
        overlap = len(wanted & set(doc.references))
        if overlap:
            scores[doc.id] = overlap
    return order(corpus, scores)


def oracle_co_read(
    corpus: Corpus, ids, now: datetime, days=90, scientists_only=True
) -> list[tuple[str, float]]:
    wanted = set(ids)
    events = window_events(corpus, now, days)
    readers = {ev.reader_id for ev in events if ev.doc_id in wanted}
    if scientists_only:
        readers &= oracle_scientists(corpus, now)
    per_doc: dict[str, set[str]] = {}
    for ev in events:
        if ev.reader_id in readers and ev.doc_id not in wanted:
            per_doc.setdefault(ev.doc_id, set()).add(ev.reader_id)
    return order(corpus, {d: float(len(rs)) for d, rs in per_doc.items()})


def oracle_similar_combination(corpus: Corpus, index, ids, k) -> list[tuple[str, float]]:
    combined: dict[str, float] = {}
    for doc_id in set(ids):
        for t, w in oracle_doc_vector(corpus, index, doc_id).items():
            combined[t] = combined.get(t, 0.0) + w
    scores = {}
    for doc_id in corpus.docs:
        if doc_id in set(ids):
            continue
        sim = oracle_cosine(combined, oracle_doc_vector(corpus, index, doc_id))
        if sim > 0:
            scores[doc_id] = sim
    ranked = order(corpus, scores)
    return ranked[:k] if k is not None else ranked


def oracle_citation_helper(corpus: Corpus, ids, n) -> list[tuple[str, float]]:
    wanted = set(ids)
    cited_by = oracle_cited_by(corpus)
    scores: dict[str, float] = {}
    for cand in corpus.docs:
        if cand in wanted:
            continue
        a = sum(1 for d in wanted if cand in corpus.docs[d].references)
        b = sum(1 for d in wanted if d in corpus.docs[cand].references)
        c = sum(
            1
            for d in wanted
            if cited_by.get(d, set()) & cited_by.get(cand, set())
        )
        if a + b + c > 0:
            scores[cand] = float(a + b + c)
    ranked = order(corpus, scores)
    return ranked[:n] if n is not None else ranked


def oracle_transitions(
    corpus: Corpus,
    near_ids,
    now: datetime,
    after: bool,
    window_days=90,
    gap_hours=6.0,
) -> dict[str, int]:
    """Counts of (near -> p) or (p -> near) adjacencies in scientists' in-window
    event sequences, sessions bounded by the gap, self-transitions skipped."""
    near = set(near_ids)
    gap = timedelta(hours=gap_hours)
    counts: dict[str, int] = {}
    for reader in sorted(oracle_scientists(corpus, now)):
        evs = sorted(
            (ev for ev in window_events(corpus, now, window_days) if ev.reader_id == reader),
            key=lambda e: (e.timestamp, e.reader_id, e.doc_id),
        )
        for a, b in zip(evs, evs[1:]):
            if b.timestamp - a.timestamp > gap or a.doc_id == b.doc_id:
                continue
            if after and a.doc_id in near:
                counts[b.doc_id] = counts.get(b.doc_id, 0) + 1
            if not after and b.doc_id in near:
                counts[a.doc_id] = counts.get(a.doc_id, 0) + 1
    return counts


def oracle_eight_slots(corpus: Corpus, near_items, doc_id: str, now: datetime) -> dict[str, str | None]:
    """Expected winner of each panel slot, recomputed from first principles.

    near_items: the (id, cosine) near list, already verified independently.
    """
    near_ids = [d for d, _ in near_items]

    def top(pairs) -> str | None:
        pairs = [(d, s) for d, s in pairs if d != doc_id]
        return pairs[0][0] if pairs else None

    out: dict[str, str | None] = {}
    out["closest"] = top(near_items)

    coread = oracle_co_read(corpus, near_ids, now) if near_ids else []
    out["coread_top"] = top(coread)

    for label, after in (("read_after", True), ("read_before", False)):
        counts = oracle_transitions(corpus, near_ids, now, after)
        counts.pop(doc_id, None)
        ranked = order(corpus, {d: float(c) for d, c in counts.items()})
        out[label] = ranked[0][0] if ranked else None

    pool = [(d, s) for d, s in coread[:30] if d != doc_id]
    if pool:
        out["recent_hot"] = min(
            pool, key=lambda it: (-corpus.docs[it[0]].pub_date.toordinal(), it[0])
        )[0]
    else:
        out["recent_hot"] = None

    out["most_cited_by_near"] = top(oracle_reference_lists(corpus, near_ids)) if near_ids else None
    out["cites_most_near"] = top(oracle_citation_lists(corpus, near_ids)) if near_ids else None

    union_entities = set()
    for nid in near_ids:
        union_entities |= corpus.docs[nid].entities
    overlap = {
        d.id: float(len(d.entities & union_entities))
        for d in corpus.docs.values()
        if d.id != doc_id and d.entities & union_entities
    }
    ranked = order(corpus, overlap)
    out["entity_overlap"] = ranked[0][0] if ranked else None
    return out


# ---------------------------------------------------------------------------
# statistics helpers


def spearman(xs, ys) -> float:
    def ranks(vals):
        idx = sorted(range(len(vals)), key=lambda i: vals[i])
        r = [0.0] * len(vals)
        i = 0
        while i < len(idx):
            j = i
            while j + 1 < len(idx) and vals[idx[j + 1]] == vals[idx[i]]:
                j += 1
            avg = (i + j) / 2.0 + 1.0
            for t in range(i, j + 1):
                r[idx[t]] = avg
            i = j + 1
        return r

    rx, ry = ranks(xs), ranks(ys)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    vy = math.sqrt(sum((b - my) ** 2 for b in ry))
    return cov / (vx * vy) if vx and vy else 0.0


def dense_eig_oracle(matrix: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-m eigenpairs of the covariance of a centered matrix, dense path."""
    xc = matrix - matrix.mean(axis=0)
    denom = max(matrix.shape[0] - 1, 1)
    cov = xc.T @ xc / denom
    vals, vecs = np.linalg.eigh(cov)
    idx = np.argsort(-vals)[:m]
    comps = vecs[:, idx]
    for j in range(comps.shape[1]):
        col = comps[:, j]
        top = int(np.argmax(np.abs(col)))
        if col[top] < 0:
            comps[:, j] = -col
    return vals[idx], comps


# ---------------------------------------------------------------------------
# synthetic corpora


VOCAB_TOPICS = {
    "lensing": ["weak", "lensing", "shear", "convergence", "dark", "matter"],
    "redshift": ["redshift", "survey", "galaxy", "spectrum", "distance"],
    "supernova": ["supernova", "explosion", "light", "curve", "progenitor"],
    "cluster": ["cluster", "galaxy", "halo", "mass", "velocity", "dispersion"],
    "exoplanet": ["planet", "transit", "radial", "velocity", "orbit", "star"],
}
JOURNALS = ["AstroJ", "CosmoLett", "SkyRev", "ObsNotes"]
ENTITIES = ["Abell383", "M31", "NGC1275", "Coma", "Virgo", "SgrA"]
AUTHORS = [
    "Adams, B.", "Baker, C.", "Chen, D.", "Diaz, E.", "Evans, F.",
    "Fischer, G.", "Garcia, H.", "Hart, I.", "Ito, J.", "Jones, K.",
]


def make_doc_record(doc_id: str, **kw) -> dict:
    rec = {
        "kind": "document",
        "id": doc_id,
        "title": kw.get("title", f"Title {doc_id}"),
        "abstract": kw.get("abstract", ""),
        "authors": kw.get("authors", ["Adams, B."]),
        "pub_date": kw.get("pub_date", "2023-01-01"),
        "journal": kw.get("journal", "AstroJ"),
        "refereed": kw.get("refereed", True),
        "keywords": kw.get("keywords", []),
        "entities": kw.get("entities", []),
        "references": kw.get("references", []),
    }
    if "body" in kw:
        rec["body"] = kw["body"]
    return rec


def make_read_record(reader: str, doc: str, ts: str) -> dict:
    return {"kind": "read", "reader": reader, "doc": doc, "ts": ts}


def random_corpus_records(
    seed: int,
    n_docs: int = 120,
    n_readers: int = 20,
    n_events: int = 800,
    now: datetime = NOW,
    n_topics: int = 5,
    ref_same_topic: float = 0.8,
    read_same_topic: float = 0.7,
) -> list[dict]:
    """Synthetic corpus: topical text, power-law citation out-degree pointing
    backward in time, and reader histories dense enough that several readers
    classify as scientists. Topic bias knobs control how block-structured the
    citation and readership graphs are."""
    rng = random.Random(seed)
    topics = list(VOCAB_TOPICS)[:n_topics]
    records = []
    ids = [f"d{i:04d}" for i in range(n_docs)]
    topic_of = {}
    for i, doc_id in enumerate(ids):
        topic = topics[i % len(topics)]
        topic_of[doc_id] = topic
        words = VOCAB_TOPICS[topic]
        pub = now.date() - timedelta(days=rng.randint(0, 2200))
        # power-law out-degree: most papers cite few, some cite many; citations
        # point backward in time and mostly stay inside the topic
        out_deg = min(int(rng.paretovariate(1.6)), 15) if i > 0 else 0
        same_topic = [d for d in ids[:i] if topic_of[d] == topic]
        refs: list[str] = []
        for _ in range(min(out_deg, i)):
            pool = same_topic if same_topic and rng.random() < ref_same_topic else ids[:i]
            pick = rng.choice(pool)
            if pick not in refs:
                refs.append(pick)
        records.append(
            make_doc_record(
                doc_id,
                title=" ".join(rng.choices(words, k=4)),
                abstract=" ".join(rng.choices(words + ["the", "of", "measurement"], k=12)),
                authors=rng.sample(AUTHORS, k=rng.randint(1, 3)),
                pub_date=pub.isoformat(),
                journal=rng.choice(JOURNALS),
                refereed=rng.random() < 0.8,
                keywords=sorted(rng.sample(words, k=2)) + [topic],
                entities=sorted(rng.sample(ENTITIES, k=rng.randint(0, 2))),
                references=refs,
            )
        )
    # readers sit down for sessions: a few reads minutes-to-an-hour apart, so
    # "read immediately after/before" transitions actually occur
    readers = [f"r{i:03d}" for i in range(n_readers)]
    favorite = {r: rng.choice(topics) for r in readers}
    by_topic = {t: [d for d in ids if topic_of[d] == t] for t in topics}
    emitted = 0
    while emitted < n_events:
        reader = rng.choice(readers)
        start = now - timedelta(
            days=rng.randint(0, 200), hours=rng.randint(0, 23), minutes=rng.randint(0, 59)
        )
        session_len = rng.randint(1, 4)
        t = start
        for _ in range(session_len):
            pool = by_topic[favorite[reader]] if rng.random() < read_same_topic else ids
            doc = rng.choice(pool)
            records.append(make_read_record(reader, doc, t.strftime("%Y-%m-%dT%H:%M:%SZ")))
            emitted += 1
            t = t + timedelta(minutes=rng.randint(2, 50))
    return records


def records_to_lines(records) -> list[str]:
    return [json.dumps(rec) for rec in records]
