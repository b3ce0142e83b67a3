"""Per-user stand-alone recommendation: the weekly digest lists and the query
page's recommender pane.

A profile names the user's own author names, their standing interest queries
(text terms only), and optionally the reader id linking them to readership
events. Digest generation is a pure function of (corpus, profile, now), so a
given Friday's page is reproducible.

Profile records share the corpus line format:

    {"kind": "profile", "user": ..., "self_author_names": [...],
     "interest_queries": ["raw query", ...], "reading_identity"?: ...}
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .config import Config
from .corpus import Corpus, authors_match, iter_record_lines
from .errors import EmptyListError
from .listops import combine_vectors, similar_to_combination
from .ranking import RankedList, rank
from .search import QuerySpec, relevance_score, run_query, spec_with_sort
from .textindex import TextIndex, cosine

WEEKLY_LABELS = (
    "citations_to_me",
    "newest_in_interest",
    "popular_in_interest",
    "similar_to_my_reads",
)
PANE_LABELS = ("todays_release", "recently_viewed", "similar_hot")


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    self_author_names: tuple[str, ...] = ()
    interest_queries: tuple[QuerySpec, ...] = ()
    reading_identity: str | None = None

    def validate(self) -> None:
        if not self.self_author_names and not self.interest_queries:
            raise ValueError(
                f"profile {self.user_id}: needs self_author_names or interest_queries"
            )


@dataclass
class LabeledList:
    label: str
    ranked: RankedList
    reason: str | None = None  # set when the list came out empty


def load_profiles(path: str | Path, index: TextIndex) -> tuple[dict[str, UserProfile], list[tuple[int, str]]]:
    """Load profile records; returns (profiles by user id, skipped lines)."""
    from .search import parse_query  # local import keeps module load order simple

    profiles: dict[str, UserProfile] = {}
    skipped: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as fh:
        for n, rec, err in iter_record_lines(fh):
            if err is not None:
                skipped.append((n, err))
                continue
            if rec["kind"] != "profile":
                skipped.append((n, f"expected kind 'profile', got {rec['kind']!r}"))
                continue
            user = rec.get("user")
            if not user:
                skipped.append((n, "profile record needs 'user'"))
                continue
            try:
                interests = tuple(
                    parse_query(q, index) for q in rec.get("interest_queries", [])
                )
                profile = UserProfile(
                    user_id=str(user),
                    self_author_names=tuple(rec.get("self_author_names", [])),
                    interest_queries=interests,
                    reading_identity=rec.get("reading_identity"),
                )
                profile.validate()
            except Exception as exc:  # noqa: BLE001 - report, never abort the load
                skipped.append((n, str(exc)))
                continue
            profiles[profile.user_id] = profile
    return profiles, skipped


def _in_recent_window(doc_pub, now: datetime, days: int) -> bool:
    age = (now.date() - doc_pub).days
    return 0 <= age < days


def _merged_interest_spec(profile: UserProfile) -> QuerySpec:
    terms = tuple(t for spec in profile.interest_queries for t in spec.terms)
    return QuerySpec(terms=terms, sort="relevant")


def weekly_digest(
    corpus: Corpus,
    index: TextIndex,
    profile: UserProfile,
    now: datetime,
    per_list: int = 5,
    cfg: Config | None = None,
) -> list[LabeledList]:
    """Four short lists of what the user should have seen this week."""
    cfg = cfg or Config()
    window = cfg.digest_window_days
    out: list[LabeledList] = []

    # 1. newest papers citing anything the user wrote
    my_papers = [
        d.id
        for d in corpus.docs.values()
        if any(authors_match(name, a) for name in profile.self_author_names for a in d.authors)
    ]
    citing: dict[str, float] = {}
    for mine in my_papers:
        for citer in corpus.citers(mine):
            if _in_recent_window(corpus.docs[citer].pub_date, now, window):
                citing[citer] = float(corpus.docs[citer].pub_date.toordinal())
    lst = rank(corpus, citing, f"digest[citations_to_me] user={profile.user_id} window={window}d")
    reason = None
    if not lst.items:
        reason = "no new papers cite your articles this week" if my_papers else "no papers by your author names"
    out.append(LabeledList("citations_to_me", lst.truncated(per_list), reason))

    # 2. this week's releases matching the interest queries
    newest: dict[str, float] = {}
    for spec in profile.interest_queries:
        hits = run_query(
            corpus, index, spec_with_sort(spec, "recent"), now, popular_window_days=cfg.popular_window_days
        )
        for doc_id, _ in hits.items:
            if _in_recent_window(corpus.docs[doc_id].pub_date, now, window):
                newest[doc_id] = float(corpus.docs[doc_id].pub_date.toordinal())
    lst = rank(corpus, newest, f"digest[newest_in_interest] user={profile.user_id} window={window}d")
    reason = None
    if not lst.items:
        reason = "no interest queries" if not profile.interest_queries else "nothing new this week"
    out.append(LabeledList("newest_in_interest", lst.truncated(per_list), reason))

    # 3. most-read papers matching the interest queries (not week-limited)
    popular: dict[str, float] = {}
    for spec in profile.interest_queries:
        hits = run_query(
            corpus,
            index,
            spec_with_sort(spec, "popular"),
            now,
            popular_window_days=cfg.popular_window_days,
        )
        for doc_id, score in hits.items:
            popular[doc_id] = max(popular.get(doc_id, 0.0), score)
    lst = rank(corpus, popular, f"digest[popular_in_interest] user={profile.user_id}")
    reason = None
    if not lst.items:
        reason = "no interest queries" if not profile.interest_queries else "no matching papers"
    out.append(LabeledList("popular_in_interest", lst.truncated(per_list), reason))

    # 4. this week's releases similar to what the user has been reading
    label = "similar_to_my_reads"
    if not profile.reading_identity:
        out.append(LabeledList(label, RankedList([], f"digest[{label}] no reading identity"), "profile has no reading identity"))
        return out
    events = corpus.reader_events(profile.reading_identity)
    recent_docs: list[str] = []
    for ev in sorted(events, key=lambda e: e.timestamp, reverse=True):
        if ev.timestamp < now and ev.doc_id not in recent_docs:
            recent_docs.append(ev.doc_id)
        if len(recent_docs) >= cfg.pane_recent_reads:
            break
    if not recent_docs:
        out.append(LabeledList(label, RankedList([], f"digest[{label}] no reads"), "no recorded reads"))
        return out
    try:
        similar = similar_to_combination(corpus, index, recent_docs, k=None)
    except EmptyListError:
        out.append(LabeledList(label, RankedList([], f"digest[{label}] unusable reads"), "recent reads have no indexable text"))
        return out
    items = [
        (d, s) for d, s in similar.items if _in_recent_window(corpus.docs[d].pub_date, now, window)
    ]
    lst = RankedList(items, f"digest[{label}] user={profile.user_id} window={window}d")
    out.append(LabeledList(label, lst.truncated(per_list), None if items else "nothing similar released this week"))
    return out


def daily_pane(
    corpus: Corpus,
    index: TextIndex,
    profile: UserProfile | None,
    recent_views: list[str],
    now: datetime,
    k: int = 5,
    cfg: Config | None = None,
) -> list[LabeledList]:
    """The query page's three unrequested lists: today's release ranked by the
    interest profile, the session's short-term memory, and hot papers similar
    to what was just viewed."""
    cfg = cfg or Config()
    out: list[LabeledList] = []

    # 1. today's release, ranked against the interest profile
    todays = [d for d in corpus.docs.values() if d.pub_date == now.date()]
    if profile is None or not profile.interest_queries:
        reason = "no active profile" if profile is None else "profile has no interest queries"
        out.append(LabeledList("todays_release", RankedList([], "pane[todays_release] unranked"), reason))
    else:
        spec = _merged_interest_spec(profile)
        counts = corpus.popular_counts([d.id for d in todays], now, cfg.popular_window_days)
        cite_max = max((corpus.citation_count(d.id) for d in todays), default=0)
        reads_max = max(counts.values(), default=0)
        scored = {
            d.id: relevance_score(
                d,
                spec,
                corpus,
                index,
                now,
                cite_max=cite_max,
                reads=counts[d.id],
                reads_max=reads_max,
                weights=cfg.weights,
            )
            for d in todays
        }
        lst = rank(corpus, scored, f"pane[todays_release] user={profile.user_id} {now.date().isoformat()}")
        out.append(LabeledList("todays_release", lst.truncated(k), None if scored else "no papers released today"))

    # 2. short-term memory: most recent first, no scoring beyond position
    views = recent_views[:k]
    items = [(doc_id, float(len(views) - i)) for i, doc_id in enumerate(views)]
    out.append(
        LabeledList(
            "recently_viewed",
            RankedList(items, "pane[recently_viewed] session order"),
            None if items else "nothing viewed yet",
        )
    )

    # 3. recent, popular papers similar to the recently viewed ones
    label = "similar_hot"
    viewed = [v for v in recent_views if v in corpus.docs]
    if not viewed:
        out.append(LabeledList(label, RankedList([], f"pane[{label}] empty session"), "nothing viewed yet"))
        return out
    centroid = combine_vectors(index, viewed)
    candidates = [
        d
        for d in corpus.docs.values()
        if _in_recent_window(d.pub_date, now, cfg.pane_hot_window_days) and d.id not in set(viewed)
    ]
    counts = corpus.popular_counts([d.id for d in candidates], now, cfg.popular_window_days)
    reads_max = max(counts.values(), default=0)
    scored = {}
    for d in candidates:
        sim = cosine(centroid, index.doc_vector(d.id)) if centroid else 0.0
        hot = counts[d.id] / reads_max if reads_max else 0.0
        score = 0.5 * sim + 0.5 * hot
        if score > 0.0:
            scored[d.id] = score
    lst = rank(corpus, scored, f"pane[{label}] {len(viewed)} views, {cfg.pane_hot_window_days}d window")
    out.append(LabeledList(label, lst.truncated(k), None if scored else "no recent similar papers"))
    return out
