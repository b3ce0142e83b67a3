"""HTTP API: every engine operation behind a thin FastAPI layer.

Endpoints are strict wrappers: each handler parses arguments, calls the
corresponding library function against the current bundle, and serializes the
result - no ranking logic lives here, so wire results match library results
exactly. Sessions (saved lists, recent views, active profile) ride on an
X-Session-Id header or a session cookie; a missing id creates a session.
"""
from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from fastapi import Body, FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import digest as digest_mod
from .. import explore as explore_mod
from ..config import Config
from ..corpus import Corpus, restore
from ..errors import (
    EmptyListError,
    EngineError,
    NotFoundError,
    NotRecommendableError,
    ParseError,
    SnapshotError,
)
from ..listops import (
    citation_helper,
    co_read,
    get_citation_lists,
    get_reference_lists,
    similar_to_combination,
)
from ..ranking import RankedList
from ..recommend import buttons as buttons_fn
from ..recommend import recommend_eight
from ..search import _parse_year_range, facets, parse_query, run_query
from . import schemas
from .state import Bundle, SessionStore, build_bundle, load_bundle

SESSION_COOKIE = "litscout_session"
SESSION_HEADER = "X-Session-Id"

_STATUS = {
    ParseError: 400,
    EmptyListError: 400,
    NotFoundError: 404,
    NotRecommendableError: 422,
    SnapshotError: 500,
}


def create_app(
    bundle: Bundle,
    sessions: SessionStore | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="litscout", version="0.1.0")
    app.state.bundle = bundle
    app.state.sessions = sessions or SessionStore(bundle.cfg.sessions_dir)

    def current() -> Bundle:
        return app.state.bundle

    def session_for(request: Request, response: Response):
        sid = request.headers.get(SESSION_HEADER) or request.cookies.get(SESSION_COOKIE)
        sess = app.state.sessions.get_or_create(sid)
        response.set_cookie(SESSION_COOKIE, sess.session_id)
        response.headers[SESSION_HEADER] = sess.session_id
        return sess

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request: Request, exc: EngineError):
        status = next((code for k, code in _STATUS.items() if isinstance(exc, k)), 500)
        body = schemas.ErrorResponse(
            error=schemas.ErrorBody(code=type(exc).__name__, message=str(exc))
        )
        return JSONResponse(status_code=status, content=body.model_dump())

    def hits(corpus: Corpus, ranked: RankedList) -> schemas.ListOut:
        items = []
        for rank_no, (doc_id, score) in enumerate(ranked.items, start=1):
            doc = corpus.docs[doc_id]
            items.append(
                schemas.Hit(
                    id=doc_id,
                    score=score,
                    rank=rank_no,
                    title=doc.title,
                    authors=list(doc.authors),
                    pub_date=doc.pub_date.isoformat(),
                    journal=doc.journal,
                    refereed=doc.refereed,
                )
            )
        return schemas.ListOut(items=items, provenance=ranked.provenance, total=len(items))

    def labeled(corpus: Corpus, lists) -> list[schemas.LabeledListOut]:
        return [
            schemas.LabeledListOut(label=ll.label, results=hits(corpus, ll.ranked), reason=ll.reason)
            for ll in lists
        ]

    # -- search -----------------------------------------------------------

    @app.get("/search", response_model=schemas.SearchResponse)
    def search(
        request: Request,
        response: Response,
        q: str,
        sort: str = "recent",
        author: str | None = None,
        journal: list[str] = Query(default=[]),
        entity: list[str] = Query(default=[]),
        keyword: list[str] = Query(default=[]),
        refereed: bool | None = None,
        year: str | None = None,
    ):
        sess = session_for(request, response)
        bnd = current()
        spec = parse_query(q, bnd.index, sort=sort)
        if author:
            spec = replace(spec, author=author)
        if journal:
            spec = replace(spec, journals=spec.journals | frozenset(journal))
        if entity:
            spec = replace(spec, entities=spec.entities | frozenset(entity))
        if keyword:
            spec = replace(spec, keywords=spec.keywords | frozenset(keyword))
        if refereed is not None:
            spec = replace(spec, refereed=refereed)
        if year:
            date_from, date_to = _parse_year_range(year)
            spec = replace(spec, date_from=date_from, date_to=date_to)
        now = bnd.cfg.now_instant()
        ranked = run_query(
            bnd.corpus, bnd.index, spec, now,
            popular_window_days=bnd.cfg.popular_window_days, weights=bnd.cfg.weights,
        )
        summary = facets(
            bnd.corpus, ranked, spec.sort, now=now, popular_window_days=bnd.cfg.popular_window_days
        )
        facet_out = {
            dim: [schemas.FacetValue(value=v, count=c) for v, c in pairs]
            for dim, pairs in summary.by_dim.items()
        }
        return schemas.SearchResponse(
            query=q, sort=spec.sort, results=hits(bnd.corpus, ranked),
            facets=facet_out, session=sess.session_id,
        )

    # -- saved lists and operators -----------------------------------------

    @app.post("/lists/{name}", response_model=schemas.ListSavedResponse)
    def save_list(
        request: Request, response: Response, name: str, body: schemas.SaveListRequest = Body(...)
    ):
        sess = session_for(request, response)
        bnd = current()
        if body.ids is not None:
            for doc_id in body.ids:
                bnd.corpus.require(doc_id)
            n = len(body.ids)
            ranked = RankedList(
                [(d, float(n - i)) for i, d in enumerate(dict.fromkeys(body.ids))],
                f"user list {name!r} ({n} documents)",
            )
        elif body.query is not None:
            spec = parse_query(body.query, bnd.index, sort=body.sort)
            ranked = run_query(
                bnd.corpus, bnd.index, spec, bnd.cfg.now_instant(),
                popular_window_days=bnd.cfg.popular_window_days, weights=bnd.cfg.weights,
            )
        else:
            raise ParseError("list body needs either 'ids' or 'query'")
        with sess.lock:
            sess.saved_lists[name] = ranked
        app.state.sessions.persist(sess)
        return schemas.ListSavedResponse(
            name=name, results=hits(bnd.corpus, ranked), session=sess.session_id
        )

    @app.get("/lists", response_model=schemas.ListNamesResponse)
    def list_names(request: Request, response: Response):
        sess = session_for(request, response)
        return schemas.ListNamesResponse(names=sorted(sess.saved_lists), session=sess.session_id)

    @app.get("/lists/{name}", response_model=schemas.ListSavedResponse)
    def get_list(request: Request, response: Response, name: str):
        sess = session_for(request, response)
        bnd = current()
        if name not in sess.saved_lists:
            raise NotFoundError(f"no saved list named {name!r} in this session")
        return schemas.ListSavedResponse(
            name=name, results=hits(bnd.corpus, sess.saved_lists[name]), session=sess.session_id
        )

    @app.post("/lists/{name}/op/{op}", response_model=schemas.OpResponse)
    def run_op(
        request: Request,
        response: Response,
        name: str,
        op: str,
        k: int = 50,
        n: int = 10,
        scientists: bool = True,
        window: int | None = None,
    ):
        sess = session_for(request, response)
        bnd = current()
        if name not in sess.saved_lists:
            raise NotFoundError(f"no saved list named {name!r} in this session")
        ranked = sess.saved_lists[name]
        cfg = bnd.cfg
        now = cfg.now_instant()
        window_days = window if window is not None else cfg.coread_window_days
        if op == "references":
            out = get_reference_lists(bnd.corpus, ranked)
        elif op == "citations":
            out = get_citation_lists(bnd.corpus, ranked)
        elif op == "coread":
            out = co_read(
                bnd.corpus, ranked, now,
                window_days=window_days, scientists_only=scientists,
                scientist_window_days=cfg.scientist_window_days,
                scientist_min_docs=cfg.scientist_min_docs,
                scientist_min_days=cfg.scientist_min_days,
            )
        elif op == "similar":
            out = similar_to_combination(bnd.corpus, bnd.index, ranked, k)
        elif op == "helper":
            out = citation_helper(bnd.corpus, ranked, n)
        else:
            raise ParseError(
                f"unknown operator {op!r} (expected references|citations|coread|similar|helper)"
            )
        return schemas.OpResponse(
            source=name, op=op, results=hits(bnd.corpus, out), session=sess.session_id
        )

    # -- explore pipelines ---------------------------------------------------

    @app.get("/explore/{mode}", response_model=schemas.ExploreResponse)
    def explore(
        request: Request,
        response: Response,
        mode: str,
        q: str,
        truncation: int | None = None,
        k: int | None = None,
    ):
        sess = session_for(request, response)
        bnd = current()
        if mode not in explore_mod.EXPLORE_MODES:
            raise ParseError(f"unknown explore mode {mode!r} (expected reviews|experts|reading)")
        spec = parse_query(q, bnd.index)
        out = explore_mod.explore(
            mode, bnd.corpus, bnd.index, spec, bnd.cfg.now_instant(),
            truncation=truncation if truncation is not None else bnd.cfg.explore_truncation,
            k=k,
        )
        return schemas.ExploreResponse(
            mode=mode, query=q, results=hits(bnd.corpus, out), session=sess.session_id
        )

    # -- documents -------------------------------------------------------------

    @app.get("/doc/{doc_id}", response_model=schemas.DocResponse)
    def doc_page(request: Request, response: Response, doc_id: str, k: int = 50):
        sess = session_for(request, response)
        bnd = current()
        doc = bnd.corpus.require(doc_id)
        now = bnd.cfg.now_instant()
        four = buttons_fn(bnd.corpus, bnd.index, doc_id, now, k=k, cfg=bnd.cfg)
        panel = None
        unavailable = None
        if bnd.model is None:
            unavailable = "no vector-space model loaded; run build-space and reload"
        else:
            try:
                slots = recommend_eight(bnd.corpus, bnd.index, bnd.model, doc_id, now, cfg=bnd.cfg)
                panel = [
                    schemas.SlotOut(
                        algorithm=s.algorithm,
                        doc_id=s.doc_id,
                        score=s.score,
                        reason=s.reason,
                        title=bnd.corpus.docs[s.doc_id].title if s.doc_id else None,
                    )
                    for s in slots
                ]
            except NotRecommendableError as exc:
                unavailable = str(exc)
        out_doc = schemas.DocumentOut(
            id=doc.id,
            title=doc.title,
            abstract=doc.abstract,
            body=doc.body,
            authors=list(doc.authors),
            pub_date=doc.pub_date.isoformat(),
            journal=doc.journal,
            refereed=doc.refereed,
            keywords=sorted(doc.keywords),
            entities=sorted(doc.entities),
            references=list(doc.references),
            citation_count=bnd.corpus.citation_count(doc_id),
            reads_90d=bnd.corpus.reads_in_window(doc_id, now, bnd.cfg.popular_window_days),
        )
        return schemas.DocResponse(
            document=out_doc,
            buttons={name: hits(bnd.corpus, lst) for name, lst in four.items()},
            panel=panel,
            panel_unavailable=unavailable,
            session=sess.session_id,
        )

    @app.post("/view/{doc_id}", response_model=schemas.ViewResponse)
    def record_view(request: Request, response: Response, doc_id: str):
        sess = session_for(request, response)
        bnd = current()
        bnd.corpus.require(doc_id)
        sess.record_view(doc_id)
        app.state.sessions.persist(sess)
        return schemas.ViewResponse(viewed=doc_id, recent=sess.views(), session=sess.session_id)

    # -- profile, digest, pane ---------------------------------------------------

    @app.post("/profile/{user_id}", response_model=schemas.ProfileSetResponse)
    def set_profile(request: Request, response: Response, user_id: str):
        sess = session_for(request, response)
        bnd = current()
        if user_id not in bnd.profiles:
            raise NotFoundError(f"unknown profile: {user_id}")
        with sess.lock:
            sess.profile_user = user_id
        app.state.sessions.persist(sess)
        return schemas.ProfileSetResponse(user=user_id, session=sess.session_id)

    @app.get("/digest", response_model=schemas.DigestResponse)
    def weekly(request: Request, response: Response, per_list: int | None = None):
        sess = session_for(request, response)
        bnd = current()
        if not sess.profile_user:
            raise NotFoundError("no active profile for this session; POST /profile/{user_id} first")
        profile = bnd.profiles.get(sess.profile_user)
        if profile is None:
            raise NotFoundError(f"unknown profile: {sess.profile_user}")
        lists = digest_mod.weekly_digest(
            bnd.corpus, bnd.index, profile, bnd.cfg.now_instant(),
            per_list=per_list if per_list is not None else bnd.cfg.digest_per_list,
            cfg=bnd.cfg,
        )
        return schemas.DigestResponse(
            user=profile.user_id, lists=labeled(bnd.corpus, lists), session=sess.session_id
        )

    @app.get("/pane", response_model=schemas.PaneResponse)
    def pane(request: Request, response: Response, k: int = 5):
        sess = session_for(request, response)
        bnd = current()
        profile = bnd.profiles.get(sess.profile_user) if sess.profile_user else None
        lists = digest_mod.daily_pane(
            bnd.corpus, bnd.index, profile, sess.views(), bnd.cfg.now_instant(), k=k, cfg=bnd.cfg
        )
        return schemas.PaneResponse(lists=labeled(bnd.corpus, lists), session=sess.session_id)

    # -- auto-complete -------------------------------------------------------------

    @app.get("/complete", response_model=schemas.CompleteResponse)
    def complete(prefix: str, limit: int = 10):
        bnd = current()
        pairs = bnd.index.complete(prefix, limit)
        return schemas.CompleteResponse(
            prefix=prefix, terms=[schemas.TermCount(term=t, count=c) for t, c in pairs]
        )

    # -- administration ---------------------------------------------------------------

    @app.post("/admin/reload", response_model=schemas.ReloadResponse)
    def reload_corpus():
        cfg = current().cfg
        if not cfg.corpus_path:
            raise SnapshotError("no corpus_path configured; nothing to reload")
        fresh = load_bundle(cfg)
        app.state.bundle = fresh  # atomic swap; in-flight requests keep the old bundle
        return schemas.ReloadResponse(
            documents=len(fresh.corpus),
            events=len(fresh.corpus.events),
            model_loaded=fresh.model is not None,
        )

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="webui")

    return app


def create_app_from_config(cfg: Config, static_dir: str | Path | None = None) -> FastAPI:
    return create_app(load_bundle(cfg), static_dir=static_dir)
