"""Runtime configuration: ranking weights, time windows, classifier thresholds,
vector-space training parameters, and data file locations.

Everything has a workable default so a bare `Config()` runs the whole engine;
a YAML file overrides any subset, and the two deployment knobs (port, corpus
path) can additionally be overridden through environment variables.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, fields, replace
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import yaml

ENV_PORT = "LITSCOUT_PORT"
ENV_CORPUS = "LITSCOUT_CORPUS"


@dataclass(frozen=True)
class RelevanceWeights:
    text: float = 0.35
    recency: float = 0.20
    cited: float = 0.20
    reads: float = 0.15
    author_pos: float = 0.10


@dataclass(frozen=True)
class Config:
    # ranking
    weights: RelevanceWeights = field(default_factory=RelevanceWeights)
    recency_halflife_years: float = 5.0
    popular_window_days: int = 90

    # reader classification ("probable scientist" rule)
    scientist_window_days: int = 180
    scientist_min_docs: int = 10
    scientist_min_days: int = 5

    # list operators
    coread_window_days: int = 90
    explore_truncation: int = 200

    # recommendation panel
    session_gap_hours: float = 6.0
    recent_hot_pool: int = 30

    # vector space training
    space_dims: int = 50
    space_recency_years: float = 5.0
    space_keyword_weight: float = 0.7
    space_reader_weight: float = 0.3
    space_seed: int = 0
    space_eigen_tol: float = 1e-8
    space_eigen_max_iter: int = 2000
    near_list_size: int = 50

    # digests
    digest_per_list: int = 5
    digest_window_days: int = 7
    pane_hot_window_days: int = 30
    pane_recent_reads: int = 10

    # data
    major_journals: tuple[str, ...] = ()
    synonyms_path: str | None = None
    stopwords_path: str | None = None
    profiles_path: str | None = None
    corpus_path: str | None = None

    # service
    port: int = 8080
    sessions_dir: str | None = None
    # Pinned clock (RFC 3339); None means wall clock. Pinning makes every
    # time-windowed operation reproducible, which fixtures and tests rely on.
    now: str | None = None

    def now_instant(self) -> datetime:
        if self.now:
            return parse_instant(self.now)
        return datetime.now(timezone.utc).replace(microsecond=0)

    def is_major(self, journal: str) -> bool:
        # Empty list means "treat every journal as major" so small corpora
        # without journal curation can still train the vector space.
        if not self.major_journals:
            return True
        return journal in self.major_journals

    def space_fingerprint(self) -> str:
        """Hash of every parameter the trained vector-space model depends on.

        A persisted model carrying a different fingerprint is stale and must
        be rebuilt rather than silently reused.
        """
        basis = {
            "dims": self.space_dims,
            "recency_years": self.space_recency_years,
            "keyword_weight": self.space_keyword_weight,
            "reader_weight": self.space_reader_weight,
            "seed": self.space_seed,
            "tol": self.space_eigen_tol,
            "max_iter": self.space_eigen_max_iter,
            "major_journals": sorted(self.major_journals),
            "scientist": [
                self.scientist_window_days,
                self.scientist_min_docs,
                self.scientist_min_days,
            ],
        }
        blob = json.dumps(basis, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def parse_instant(text: str) -> datetime:
    """Parse an RFC 3339 instant to an aware UTC datetime at second resolution."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def format_instant(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).replace(microsecond=0, tzinfo=None).isoformat() + "Z"


def default_stopwords() -> set[str]:
    text = resources.files("litscout.data").joinpath("stopwords.txt").read_text()
    return {line.strip() for line in text.splitlines() if line.strip()}


def default_synonyms_text() -> str:
    return resources.files("litscout.data").joinpath("synonyms.tsv").read_text()


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> Config:
    """Build a Config from an optional YAML file plus environment overrides."""
    env = os.environ if env is None else env
    data: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ValueError(f"config file {path} must hold a mapping, got {type(data).__name__}")

    cfg = Config()
    weights = data.pop("weights", None)
    if weights:
        cfg = replace(cfg, weights=RelevanceWeights(**weights))
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "major_journals" in data:
        data["major_journals"] = tuple(data["major_journals"])
    cfg = replace(cfg, **data)

    if env.get(ENV_PORT):
        cfg = replace(cfg, port=int(env[ENV_PORT]))
    if env.get(ENV_CORPUS):
        cfg = replace(cfg, corpus_path=env[ENV_CORPUS])
    return cfg
