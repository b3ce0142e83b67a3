"""Server-side state: the immutable engine bundle and the mutable session map.

The bundle (corpus, index, model, profiles, config) is built once and swapped
wholesale on reload, so every in-flight request keeps a consistent view.
Sessions hold the user's saved lists, their recent views, and the active
profile; mutation is serialized per session.
"""
from __future__ import annotations

import json
import threading
import uuid
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from ..config import Config, default_stopwords
from ..corpus import Corpus, restore
from ..digest import UserProfile, load_profiles
from ..ranking import RankedList
from ..textindex import SynonymTable, TextIndex
from ..vectorspace import SpaceModel

RECENT_VIEWS_CAP = 50


@dataclass
class Bundle:
    cfg: Config
    corpus: Corpus
    index: TextIndex
    model: SpaceModel | None
    profiles: dict[str, UserProfile]


def build_bundle(cfg: Config, corpus: Corpus, model_payload: dict | None = None) -> Bundle:
    synonyms = SynonymTable.load(cfg.synonyms_path)
    if cfg.stopwords_path:
        with open(cfg.stopwords_path, encoding="utf-8") as fh:
            stopwords = {line.strip() for line in fh if line.strip()}
    else:
        stopwords = default_stopwords()
    index = TextIndex(corpus, synonyms, stopwords)
    model = None
    if model_payload is not None:
        # a stale fingerprint silently drops the model; recs endpoints then
        # report the panel as unavailable until a rebuild
        model = SpaceModel.from_payload(model_payload, expected_fingerprint=cfg.space_fingerprint())
    profiles: dict[str, UserProfile] = {}
    if cfg.profiles_path:
        profiles, _ = load_profiles(cfg.profiles_path, index)
    return Bundle(cfg=cfg, corpus=corpus, index=index, model=model, profiles=profiles)


def load_bundle(cfg: Config) -> Bundle:
    if cfg.corpus_path:
        corpus, payload = restore(cfg.corpus_path)
    else:
        corpus, payload = Corpus([], []), None
    return build_bundle(cfg, corpus, payload)


@dataclass
class Session:
    session_id: str
    saved_lists: dict[str, RankedList] = field(default_factory=dict)
    recent_views: deque = field(default_factory=lambda: deque(maxlen=RECENT_VIEWS_CAP))
    profile_user: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record_view(self, doc_id: str) -> None:
        with self.lock:
            if doc_id in self.recent_views:
                self.recent_views.remove(doc_id)
            self.recent_views.appendleft(doc_id)  # most recent first

    def views(self) -> list[str]:
        return list(self.recent_views)

    def to_payload(self) -> dict:
        return {
            "session_id": self.session_id,
            "saved_lists": {
                name: {"items": lst.items, "provenance": lst.provenance}
                for name, lst in self.saved_lists.items()
            },
            "recent_views": list(self.recent_views),
            "profile_user": self.profile_user,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "Session":
        sess = cls(session_id=payload["session_id"])
        for name, lst in payload.get("saved_lists", {}).items():
            sess.saved_lists[name] = RankedList(
                [(d, float(s)) for d, s in lst["items"]], lst["provenance"]
            )
        sess.recent_views.extend(payload.get("recent_views", []))
        sess.profile_user = payload.get("profile_user")
        return sess


class SessionStore:
    """In-memory sessions, optionally mirrored to one JSON file per session."""

    def __init__(self, persist_dir: str | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._dir = Path(persist_dir) if persist_dir else None
        if self._dir:
            self._dir.mkdir(parents=True, exist_ok=True)

    def get_or_create(self, session_id: str | None) -> Session:
        with self._lock:
            if session_id and session_id in self._sessions:
                return self._sessions[session_id]
            if session_id and self._dir:
                path = self._dir / f"{session_id}.json"
                if path.exists():
                    sess = Session.from_payload(json.loads(path.read_text()))
                    self._sessions[session_id] = sess
                    return sess
            sid = session_id or uuid.uuid4().hex
            sess = Session(session_id=sid)
            self._sessions[sid] = sess
            return sess

    def persist(self, sess: Session) -> None:
        if self._dir:
            path = self._dir / f"{sess.session_id}.json"
            path.write_text(json.dumps(sess.to_payload(), sort_keys=True))
