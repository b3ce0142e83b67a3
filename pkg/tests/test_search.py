import math
from datetime import date, timedelta

import pytest

from litscout.errors import ParseError
from litscout.ranking import RankedList
from litscout.search import (
    FacetSummary,
    ListFilter,
    QuerySpec,
    edit,
    facets,
    parse_query,
    refine,
    relevance_score,
    run_query,
)
from litscout.textindex import QueryTerm

from .oracles import (
    NOW,
    make_doc_record,
    make_read_record,
    oracle_cosine,
    oracle_doc_vector,
    oracle_facet_counts,
    oracle_run_query,
)


def ts(days_ago: int, hour: int = 9) -> str:
    return (NOW - timedelta(days=days_ago)).replace(hour=hour).strftime("%Y-%m-%dT%H:%M:%SZ")


# ---------------------------------------------------------------------------
# parsing


def test_parse_phrase_entity_year(indexed_factory):
    _, index = indexed_factory([make_doc_record("A")])
    spec = parse_query('"weak lensing" entity:Abell383 year:2011-2012', index)
    assert spec.terms == (QueryTerm(("weak", "lensing"), phrase=True),)
    assert spec.entities == frozenset({"Abell383"})
    assert spec.date_from == date(2011, 1, 1)
    assert spec.date_to == date(2012, 12, 31)
    assert spec.sort == "recent"


def test_parse_empty_query_rejected(indexed_factory):
    _, index = indexed_factory([make_doc_record("A")])
    with pytest.raises(ParseError, match="empty query"):
        parse_query("", index)


def test_parse_author_only_is_valid(indexed_factory):
    _, index = indexed_factory([make_doc_record("A")])
    spec = parse_query('author:"Kurtz, M."', index)
    assert spec.author == "Kurtz, M."
    assert spec.terms == ()


def test_parse_unknown_field_named(indexed_factory):
    _, index = indexed_factory([make_doc_record("A")])
    with pytest.raises(ParseError, match="wavelength"):
        parse_query("wavelength:21cm", index)


def test_parse_unbalanced_quote_positions(indexed_factory):
    _, index = indexed_factory([make_doc_record("A")])
    with pytest.raises(ParseError, match="position 8"):
        parse_query('redshift" survey', index)


def test_parse_bare_sort_over_everything_rejected(indexed_factory):
    _, index = indexed_factory([make_doc_record("A")])
    with pytest.raises(ParseError):
        parse_query("journal:AstroJ refereed:true", index)


def test_parse_refereed_and_journal_filters(indexed_factory):
    _, index = indexed_factory([make_doc_record("A")])
    spec = parse_query("redshift refereed:false journal:AstroJ", index)
    assert spec.refereed is False
    assert spec.journals == frozenset({"AstroJ"})
    with pytest.raises(ParseError):
        parse_query("redshift refereed:maybe", index)


# ---------------------------------------------------------------------------
# run_query sorts


def sort_fixture(indexed_factory):
    records = [
        make_doc_record("A", title="topic paper", pub_date="2010-05-01"),
        make_doc_record("B", title="topic paper", pub_date="2012-05-01"),
        make_doc_record("C", title="topic paper", pub_date="2011-05-01"),
    ]
    # citations: A=5, B=0, C=2
    for i in range(5):
        records.append(make_doc_record(f"citerA{i}", title="offtopic", references=["A"]))
    for i in range(2):
        records.append(make_doc_record(f"citerC{i}", title="offtopic", references=["C"]))
    return indexed_factory(records)


def test_sort_recent(indexed_factory):
    corpus, index = sort_fixture(indexed_factory)
    spec = parse_query("topic", index, sort="recent")
    got = run_query(corpus, index, spec, NOW)
    assert got.ids() == ["B", "C", "A"]
    got.validate()


def test_sort_cited(indexed_factory):
    corpus, index = sort_fixture(indexed_factory)
    spec = parse_query("topic", index, sort="cited")
    got = run_query(corpus, index, spec, NOW)
    assert got.ids() == ["A", "C", "B"]
    assert got.scores() == {"A": 5.0, "C": 2.0, "B": 0.0}


def test_sort_popular_matches_recount_oracle(random_corpus_bundle):
    corpus, index = random_corpus_bundle
    spec = parse_query("galaxy", index, sort="popular")
    got = run_query(corpus, index, spec, NOW)
    assert got.items == oracle_run_query(corpus, index, spec, NOW)


def test_every_sort_matches_oracle_on_random_corpus(random_corpus_bundle):
    corpus, index = random_corpus_bundle
    for raw in ("galaxy", "redshift survey", '"weak lensing"', "supernova entity:M31"):
        for sort in ("recent", "cited", "popular", "relevant"):
            spec = parse_query(raw, index, sort=sort)
            got = run_query(corpus, index, spec, NOW)
            expected = oracle_run_query(corpus, index, spec, NOW)
            assert got.ids() == [d for d, _ in expected], (raw, sort)
            for (d1, s1), (d2, s2) in zip(got.items, expected):
                assert d1 == d2
                assert abs(s1 - s2) < 1e-9


# ---------------------------------------------------------------------------
# relevance


def test_relevance_single_doc_hand_computed(indexed_factory):
    corpus, index = indexed_factory(
        [
            make_doc_record("A", title="quasar spectrum", pub_date="2023-07-01"),
            make_doc_record("B", title="other things", references=["A"]),
            make_read_record("r1", "A", ts(10)),
        ]
    )
    spec = parse_query("quasar", index, sort="relevant")
    got = run_query(corpus, index, spec, NOW)
    assert got.ids() == ["A"]
    # single-doc result set: cited and reads components are exactly 1
    text = oracle_cosine({"quasar": 1.0}, oracle_doc_vector(corpus, index, "A"))
    age_years = (NOW.date() - date(2023, 7, 1)).days / 365.25
    recency = math.exp(-age_years / 5)
    expected = (0.35 * text + 0.20 * recency + 0.20 * 1.0 + 0.15 * 1.0) / 0.90
    assert abs(got.items[0][1] - expected) < 1e-12


def test_relevance_newer_scores_higher(indexed_factory):
    corpus, index = indexed_factory(
        [
            make_doc_record("OLD", title="quasar spectrum", pub_date="2015-01-01"),
            make_doc_record("NEW", title="quasar spectrum", pub_date="2024-01-01"),
        ]
    )
    spec = parse_query("quasar", index, sort="relevant")
    got = run_query(corpus, index, spec, NOW)
    assert got.ids() == ["NEW", "OLD"]
    assert got.items[0][1] > got.items[1][1]


def test_relevance_author_rank(indexed_factory):
    corpus, index = indexed_factory(
        [
            make_doc_record("FIRST", title="quasar", authors=["Kurtz, M.", "Adams, B."]),
            make_doc_record("THIRD", title="quasar", authors=["Adams, B.", "Chen, D.", "Kurtz, M."]),
        ]
    )
    spec = parse_query('quasar author:"Kurtz, M."', index, sort="relevant")
    got = run_query(corpus, index, spec, NOW)
    assert got.ids() == ["FIRST", "THIRD"]


def test_relevance_scale_stable_under_unrelated_addition(indexed_factory):
    base = [
        make_doc_record("A", title="quasar spectrum survey", pub_date="2024-01-01"),
        make_doc_record("B", title="quasar noise", pub_date="2018-01-01"),
    ]
    unrelated = make_doc_record("Z", title="entirely disjoint vocabulary", pub_date="2020-01-01")
    corpus1, index1 = indexed_factory(base)
    corpus2, index2 = indexed_factory(base + [unrelated])
    spec1 = parse_query("quasar", index1, sort="relevant")
    spec2 = parse_query("quasar", index2, sort="relevant")
    order1 = [d for d in run_query(corpus1, index1, spec1, NOW).ids()]
    order2 = [d for d in run_query(corpus2, index2, spec2, NOW).ids() if d != "Z"]
    assert order1 == order2


# ---------------------------------------------------------------------------
# facets


def test_facets_empty_list(corpus_factory):
    corpus = corpus_factory([make_doc_record("A")])
    summary = facets(corpus, RankedList([], "empty"), "recent")
    assert all(vals == [] for vals in summary.by_dim.values())


def test_facet_author_counts(indexed_factory):
    corpus, index = indexed_factory(
        [
            make_doc_record("1", title="topic", authors=["X", "Y"]),
            make_doc_record("2", title="topic", authors=["X"]),
            make_doc_record("3", title="topic", authors=["Z"]),
        ]
    )
    lst = run_query(corpus, index, parse_query("topic", index), NOW)
    summary = facets(corpus, lst, "recent")
    assert summary.by_dim["author"] == [("X", 2), ("Y", 1), ("Z", 1)]
    # counts are exact: year counts sum to list length
    assert sum(c for _, c in summary.by_dim["year"]) == len(lst)


def test_facet_ordering_under_cited_matches_oracle(random_corpus_bundle):
    corpus, index = random_corpus_bundle
    spec = parse_query("galaxy", index, sort="cited")
    lst = run_query(corpus, index, spec, NOW)
    summary = facets(corpus, lst, "cited")
    counts = oracle_facet_counts(corpus, lst.ids())
    # counts must agree exactly for every dimension
    for dim, pairs in summary.by_dim.items():
        assert dict(pairs) == counts[dim], dim
    # author facet ordered by summed citations of carrying docs
    sums = {}
    for doc_id in lst.ids():
        doc = corpus.docs[doc_id]
        c = len([d for d in corpus.docs.values() if doc_id in d.references])
        for a in doc.authors:
            sums[a] = sums.get(a, 0) + c
    expected_order = sorted(counts["author"].items(), key=lambda vc: (-sums.get(vc[0], 0), vc[0]))
    assert summary.by_dim["author"] == expected_order


def test_facet_year_always_chronological(random_corpus_bundle):
    corpus, index = random_corpus_bundle
    lst = run_query(corpus, index, parse_query("galaxy", index, sort="popular"), NOW)
    years = [int(y) for y, _ in facets(corpus, lst, "popular", now=NOW).by_dim["year"]]
    assert years == sorted(years)


# ---------------------------------------------------------------------------
# refine / edit


def test_refine_refereed_identity(indexed_factory):
    corpus, index = indexed_factory(
        [make_doc_record(f"d{i}", title="topic", refereed=True) for i in range(4)]
    )
    lst = run_query(corpus, index, parse_query("topic", index), NOW)
    out = refine(corpus, lst, ListFilter(refereed=True))
    assert out.items == lst.items
    assert "refine" in out.provenance


def test_edit_keep_top(indexed_factory):
    corpus, index = indexed_factory(
        [make_doc_record(f"d{i}", title="topic", pub_date=f"20{10 + i}-01-01") for i in range(10)]
    )
    lst = run_query(corpus, index, parse_query("topic", index), NOW)
    out = edit(corpus, lst, keep_top=3)
    assert out.items == lst.items[:3]


def test_edit_remove_missing_is_noop_with_note(indexed_factory):
    corpus, index = indexed_factory([make_doc_record("A", title="topic")])
    lst = run_query(corpus, index, parse_query("topic", index), NOW)
    out = edit(corpus, lst, remove=("GHOST",))
    assert out.items == lst.items
    assert "not in list" in out.provenance


def test_edit_date_truncation_hand_partition(indexed_factory):
    young = NOW.date() - timedelta(days=100)
    old = NOW.date() - timedelta(days=400)
    corpus, index = indexed_factory(
        [
            make_doc_record("Y1", title="topic", pub_date=young.isoformat()),
            make_doc_record("O1", title="topic", pub_date=old.isoformat()),
            make_doc_record("Y2", title="topic", pub_date=young.isoformat()),
        ]
    )
    lst = run_query(corpus, index, parse_query("topic", index), NOW)
    out = edit(corpus, lst, max_age_days=365, now=NOW)
    assert set(out.ids()) == {"Y1", "Y2"}
    # survivors keep their relative order
    assert out.ids() == [d for d in lst.ids() if d in {"Y1", "Y2"}]


def test_refine_equals_requery(random_corpus_bundle):
    corpus, index = random_corpus_bundle
    for sort in ("recent", "cited", "popular"):
        spec = parse_query("galaxy", index, sort=sort)
        broad = run_query(corpus, index, spec, NOW)
        refined = refine(corpus, broad, ListFilter(refereed=True))
        narrow_spec = parse_query("galaxy refereed:true", index, sort=sort)
        narrow = run_query(corpus, index, narrow_spec, NOW)
        assert refined.ids() == narrow.ids(), sort
    # relevant: set equality only (scores renormalize against the result set)
    spec = parse_query("galaxy", index, sort="relevant")
    refined = refine(corpus, run_query(corpus, index, spec, NOW), ListFilter(refereed=True))
    narrow = run_query(corpus, index, parse_query("galaxy refereed:true", index, sort="relevant"), NOW)
    assert set(refined.ids()) == set(narrow.ids())
