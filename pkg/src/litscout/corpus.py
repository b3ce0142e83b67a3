"""Bibliographic data model: documents, readership events, derived citation
indexes, line-delimited record ingestion, and snapshot persistence.

The record file format is one self-describing JSON object per line:

    {"kind": "document", "id": ..., "title": ..., "abstract": ..., "body"?: ...,
     "authors": [...], "pub_date": "YYYY-MM-DD", "journal": ..., "refereed": bool,
     "keywords": [...], "entities": [...], "references": [...]}
    {"kind": "read", "reader": ..., "doc": ..., "ts": "RFC-3339 instant"}

Bad lines are skipped and reported, never fatal; an unreadable path is fatal.
A later document record with an existing id replaces the earlier one.
"""
from __future__ import annotations

import gzip
import io
import json
import re
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from pathlib import Path
from typing import Iterable, Iterator

from .config import format_instant, parse_instant
from .errors import NotFoundError, SnapshotError

SNAPSHOT_FORMAT = "litscout-corpus"
SNAPSHOT_VERSION = 1

_PUNCT = re.compile(r"[^\w\s,]")


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    abstract: str = ""
    body: str | None = None
    authors: tuple[str, ...] = ()
    pub_date: date = date(1970, 1, 1)
    journal: str = ""
    refereed: bool = False
    keywords: frozenset[str] = frozenset()
    entities: frozenset[str] = frozenset()
    references: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReadershipEvent:
    reader_id: str
    doc_id: str
    timestamp: datetime  # aware UTC, second resolution

    def key(self) -> tuple[str, str, datetime]:
        return (self.reader_id, self.doc_id, self.timestamp)


@dataclass
class LoadReport:
    """Per-ingest accounting: what was loaded, replaced, deduplicated, dropped."""

    documents_added: int = 0
    documents_replaced: int = 0
    reads_added: int = 0
    reads_duplicate: int = 0
    reads_dangling: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)
    total_documents: int = 0
    total_events: int = 0

    def as_dict(self) -> dict:
        return {
            "documents_added": self.documents_added,
            "documents_replaced": self.documents_replaced,
            "reads_added": self.reads_added,
            "reads_duplicate": self.reads_duplicate,
            "reads_dangling": self.reads_dangling,
            "skipped_lines": [{"line": n, "reason": r} for n, r in self.skipped],
            "total_documents": self.total_documents,
            "total_events": self.total_events,
        }


def author_key(name: str) -> tuple[str, str]:
    """Normalize an author name to (last, first-initial) for exact matching.

    "Kurtz, M. J." -> ("kurtz", "m"); "Kurtz" -> ("kurtz", ""). Punctuation
    apart from the comma is stripped; no disambiguation is attempted.
    """
    cleaned = _PUNCT.sub(" ", name.lower())
    if "," in cleaned:
        last, _, rest = cleaned.partition(",")
        rest = rest.strip()
        initial = rest[0] if rest else ""
    else:
        parts = cleaned.split()
        last = parts[-1] if parts else ""
        initial = parts[0][0] if len(parts) > 1 else ""
    return (last.strip().replace(" ", ""), initial)


def authors_match(filter_name: str, author_name: str) -> bool:
    want = author_key(filter_name)
    have = author_key(author_name)
    if want[0] != have[0]:
        return False
    return want[1] == "" or want[1] == have[1]


class Corpus:
    """Immutable document + readership store with derived citation indexes.

    Construction is single-writer; afterwards every structure is read-only and
    safe to share across threads. Re-ingestion builds a whole new corpus.
    """

    def __init__(self, documents: Iterable[Document], events: Iterable[ReadershipEvent]):
        self.docs: dict[str, Document] = {d.id: d for d in sorted(documents, key=lambda d: d.id)}
        kept = {}
        for ev in events:
            if ev.doc_id in self.docs:
                kept[ev.key()] = ev
        self.events: tuple[ReadershipEvent, ...] = tuple(
            sorted(kept.values(), key=lambda e: (e.timestamp, e.reader_id, e.doc_id))
        )

        # cited_by is the exact inverse of the reference relation restricted to
        # known ids; unknown references stay on the document but are invisible here.
        cited_by: dict[str, set[str]] = {}
        for doc in self.docs.values():
            for ref in doc.references:
                if ref in self.docs:
                    cited_by.setdefault(ref, set()).add(doc.id)
        self.cited_by: dict[str, frozenset[str]] = {k: frozenset(v) for k, v in cited_by.items()}

        self._events_by_doc: dict[str, list[ReadershipEvent]] = {}
        self._events_by_reader: dict[str, list[ReadershipEvent]] = {}
        for ev in self.events:
            self._events_by_doc.setdefault(ev.doc_id, []).append(ev)
            self._events_by_reader.setdefault(ev.reader_id, []).append(ev)

    # -- documents ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.docs

    def get(self, doc_id: str) -> Document | None:
        return self.docs.get(doc_id)

    def require(self, doc_id: str) -> Document:
        doc = self.docs.get(doc_id)
        if doc is None:
            raise NotFoundError(f"unknown document id: {doc_id}")
        return doc

    def ids(self) -> list[str]:
        return list(self.docs)

    # -- citations ---------------------------------------------------------

    def citers(self, doc_id: str) -> frozenset[str]:
        return self.cited_by.get(doc_id, frozenset())

    def citation_count(self, doc_id: str) -> int:
        return len(self.cited_by.get(doc_id, ()))

    def known_references(self, doc_id: str) -> list[str]:
        doc = self.require(doc_id)
        return [r for r in doc.references if r in self.docs]

    # -- readership --------------------------------------------------------

    def doc_events(self, doc_id: str) -> list[ReadershipEvent]:
        return self._events_by_doc.get(doc_id, [])

    def reader_events(self, reader_id: str) -> list[ReadershipEvent]:
        return self._events_by_reader.get(reader_id, [])

    def reader_ids(self) -> list[str]:
        return sorted(self._events_by_reader)

    def readers_in_window(self, doc_id: str, now: datetime, window_days: int) -> set[str]:
        """Distinct readers of a document inside the half-open window [now-W, now)."""
        start = now - timedelta(days=window_days)
        return {
            ev.reader_id
            for ev in self._events_by_doc.get(doc_id, [])
            if start <= ev.timestamp < now
        }

    def reads_in_window(self, doc_id: str, now: datetime, window_days: int) -> int:
        # Distinct (reader, doc) pairs, not raw events: a reader re-downloading
        # the same paper does not inflate its popularity.
        return len(self.readers_in_window(doc_id, now, window_days))

    def popular_counts(self, doc_ids: Iterable[str], now: datetime, window_days: int) -> dict[str, int]:
        return {d: self.reads_in_window(d, now, window_days) for d in doc_ids}


# ---------------------------------------------------------------------------
# record parsing


def parse_document(rec: dict) -> Document:
    doc_id = rec.get("id")
    if not doc_id or not isinstance(doc_id, str):
        raise ValueError("document record needs a nonempty string 'id'")
    title = rec.get("title")
    if not isinstance(title, str):
        raise ValueError(f"document {doc_id}: missing 'title'")
    try:
        pub = date.fromisoformat(rec["pub_date"])
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"document {doc_id}: bad or missing 'pub_date'")

    refs: list[str] = []
    for ref in rec.get("references", []):
        if ref != doc_id and ref not in refs:  # never self, never duplicated
            refs.append(ref)

    return Document(
        id=doc_id,
        title=title,
        abstract=rec.get("abstract", "") or "",
        body=rec.get("body"),
        authors=tuple(rec.get("authors", [])),
        pub_date=pub,
        journal=rec.get("journal", "") or "",
        refereed=bool(rec.get("refereed", False)),
        keywords=frozenset(rec.get("keywords", [])),
        entities=frozenset(rec.get("entities", [])),
        references=tuple(refs),
    )


def parse_event(rec: dict) -> ReadershipEvent:
    reader = rec.get("reader")
    doc = rec.get("doc")
    if not reader or not doc:
        raise ValueError("read record needs 'reader' and 'doc'")
    try:
        ts = parse_instant(rec["ts"])
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"read record for {doc}: bad or missing 'ts'")
    return ReadershipEvent(reader_id=str(reader), doc_id=str(doc), timestamp=ts)


def document_record(doc: Document) -> dict:
    rec = {
        "kind": "document",
        "id": doc.id,
        "title": doc.title,
        "abstract": doc.abstract,
        "authors": list(doc.authors),
        "pub_date": doc.pub_date.isoformat(),
        "journal": doc.journal,
        "refereed": doc.refereed,
        "keywords": sorted(doc.keywords),
        "entities": sorted(doc.entities),
        "references": list(doc.references),
    }
    if doc.body is not None:
        rec["body"] = doc.body
    return rec


def event_record(ev: ReadershipEvent) -> dict:
    return {"kind": "read", "reader": ev.reader_id, "doc": ev.doc_id, "ts": format_instant(ev.timestamp)}


def iter_record_lines(lines: Iterable[str]) -> Iterator[tuple[int, dict | None, str | None]]:
    """Yield (line_no, record, error) per nonblank line; exactly one of record/error set."""
    for n, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            yield n, None, f"invalid JSON: {exc.msg}"
            continue
        if not isinstance(rec, dict) or "kind" not in rec:
            yield n, None, "record must be a JSON object with a 'kind' field"
            continue
        yield n, rec, None


def ingest_records(
    records: Iterable[tuple[int, dict | None, str | None]],
    base: Corpus | None = None,
) -> tuple[Corpus, LoadReport]:
    report = LoadReport()
    docs: dict[str, Document] = dict(base.docs) if base else {}
    events: dict[tuple, ReadershipEvent] = {e.key(): e for e in base.events} if base else {}
    pending_events: list[tuple[int, ReadershipEvent]] = []

    for n, rec, err in records:
        if err is not None:
            report.skipped.append((n, err))
            continue
        kind = rec["kind"]
        try:
            if kind == "document":
                doc = parse_document(rec)
                if doc.id in docs:
                    report.documents_replaced += 1
                else:
                    report.documents_added += 1
                docs[doc.id] = doc  # last writer wins
            elif kind == "read":
                pending_events.append((n, parse_event(rec)))
            else:
                report.skipped.append((n, f"unknown record kind: {kind!r}"))
        except ValueError as exc:
            report.skipped.append((n, str(exc)))

    # Events resolve against the document set of the *completed* ingest, so a
    # read line may legitimately precede its document line.
    for n, ev in pending_events:
        if ev.doc_id not in docs:
            report.reads_dangling += 1
            continue
        if ev.key() in events:
            report.reads_duplicate += 1
            continue
        events[ev.key()] = ev
        report.reads_added += 1

    corpus = Corpus(docs.values(), events.values())
    report.total_documents = len(corpus)
    report.total_events = len(corpus.events)
    return corpus, report


def ingest(path: str | Path, base: Corpus | None = None) -> tuple[Corpus, LoadReport]:
    """Load a record file into a (new) corpus. Unreadable path raises OSError."""
    with open(path, encoding="utf-8") as fh:
        return ingest_records(iter_record_lines(fh), base=base)


# ---------------------------------------------------------------------------
# snapshot persistence


def snapshot(corpus: Corpus, path: str | Path, model_payload: dict | None = None) -> Path:
    """Write a versioned single-file snapshot (gzipped JSON, deterministic bytes)."""
    payload = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "documents": [document_record(d) for d in corpus.docs.values()],
        "events": [event_record(e) for e in corpus.events],
        "model": model_payload,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    path = Path(path)
    with open(path, "wb") as raw:
        # fixed mtime and no embedded filename: identical corpora must produce
        # identical snapshot bytes
        with gzip.GzipFile(filename="", fileobj=raw, mode="wb", mtime=0) as gz:
            gz.write(blob)
    return path


def restore(path: str | Path) -> tuple[Corpus, dict | None]:
    """Load a snapshot; returns (corpus, persisted model payload or None).

    Any corruption (truncation, bad compression, bad JSON) and any version
    other than the current one is a SnapshotError.
    """
    try:
        with open(path, "rb") as raw:
            blob = gzip.decompress(raw.read())
        payload = json.loads(blob)
    except OSError as exc:
        if isinstance(exc, FileNotFoundError):
            raise
        raise SnapshotError(f"snapshot {path} is not readable as gzip: {exc}")
    except (EOFError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SnapshotError(f"snapshot {path} is corrupt: {exc}")

    if not isinstance(payload, dict) or payload.get("format") != SNAPSHOT_FORMAT:
        raise SnapshotError(f"snapshot {path} does not carry format {SNAPSHOT_FORMAT!r}")
    version = payload.get("version")
    if version != SNAPSHOT_VERSION:
        raise SnapshotError(
            f"snapshot version {version!r} not supported; this build reads version {SNAPSHOT_VERSION}"
        )

    docs = [parse_document(rec) for rec in payload["documents"]]
    events = [parse_event(rec) for rec in payload["events"]]
    return Corpus(docs, events), payload.get("model")


def dump_records(records: Iterable[dict], out: io.TextIOBase) -> None:
    for rec in records:
        out.write(json.dumps(rec, sort_keys=True) + "\n")
