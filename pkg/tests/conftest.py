from __future__ import annotations

import pytest

from litscout.corpus import Corpus, ingest_records, iter_record_lines
from litscout.textindex import TextIndex

from . import oracles
from .oracles import NOW, make_doc_record, make_read_record, records_to_lines


def build_corpus(records) -> Corpus:
    corpus, report = ingest_records(iter_record_lines(records_to_lines(records)))
    assert not report.skipped, f"fixture records must be clean: {report.skipped}"
    return corpus


@pytest.fixture(scope="session")
def now():
    return NOW


@pytest.fixture()
def corpus_factory():
    def _make(records) -> Corpus:
        return build_corpus(records)

    return _make


@pytest.fixture()
def indexed_factory():
    def _make(records) -> tuple[Corpus, TextIndex]:
        corpus = build_corpus(records)
        return corpus, TextIndex(corpus)

    return _make


@pytest.fixture(scope="session")
def random_corpus_bundle():
    """One medium random corpus shared by read-only oracle tests."""
    records = oracles.random_corpus_records(seed=7, n_docs=100, n_readers=15, n_events=600)
    corpus, report = ingest_records(iter_record_lines(records_to_lines(records)))
    assert not report.skipped
    return corpus, TextIndex(corpus)
