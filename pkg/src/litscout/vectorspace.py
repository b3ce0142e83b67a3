"""Reduced document space for the recommendation panel.

Each recent major-journal document is described by two feature blocks:

  * keyword block - for every basis keyword, how many of the document's
    references carry that keyword;
  * reader block  - for every scientist-class reader, whether that reader
    read the document inside the training window.

Blocks are L2-normalized, weighted (keywords 0.7, readers 0.3 by default) and
concatenated. The space is the span of the top-m principal directions of the
centered training matrix, found by seeded subspace iteration with a final
Jacobi (Rayleigh-Ritz) rotation; convergence is declared when no eigenvalue
estimate moves by more than the tolerance between sweeps. Projection itself is
linear (no recentering), so scaling a feature vector never changes its
direction in the space.

Rank-deficient training data (fewer informative directions than requested)
drops the model into a fallback where nearness is cosine over the raw,
unreduced feature vectors; the fallback is recorded in every near-list
provenance so downstream consumers can tell.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np

from .config import Config, format_instant, parse_instant
from .corpus import Corpus, Document
from .errors import NotRecommendableError, TrainingError
from .listops import scientist_ids
from .ranking import RankedList, rank


def _jacobi_eigh(a: np.ndarray, sweeps: int = 64, tol: float = 1e-14) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors-as-columns), unordered. Deterministic.
    """
    a = a.copy().astype(np.float64)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
                if abs(a[p, q]) <= tol * (abs(a[p, p]) + abs(a[q, q]) + 1e-300):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
        if off <= tol:
            break
    return np.diag(a).copy(), v


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive (canonical sign)."""
    out = components.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = int(np.argmax(np.abs(col)))
        if col[idx] < 0:
            out[:, j] = -col
    return out


@dataclass
class DocVector:
    """A document's position in the space: unit coordinates plus the
    pre-normalization magnitude. norm == 0 marks the null vector of a
    document with no usable features; such documents are not recommendable."""

    doc_id: str
    coords: np.ndarray
    norm: float

    @property
    def is_null(self) -> bool:
        return self.norm == 0.0


class SpaceModel:
    def __init__(
        self,
        dims: int,
        keyword_basis: tuple[str, ...],
        reader_basis: tuple[str, ...],
        keyword_weight: float,
        reader_weight: float,
        mean: np.ndarray,
        components: np.ndarray,  # (feature_dim, dims) columns
        eigenvalues: np.ndarray,
        trained_on: tuple[str, ...],
        trained_at: datetime,
        window_days: int,
        fingerprint: str,
        fallback: bool,
        converged: bool,
        iterations: int,
    ):
        self.dims = dims
        self.keyword_basis = keyword_basis
        self.reader_basis = reader_basis
        self.keyword_weight = keyword_weight
        self.reader_weight = reader_weight
        self.mean = mean
        self.components = components
        self.eigenvalues = eigenvalues
        self.trained_on = trained_on
        self.trained_at = trained_at
        self.window_days = window_days
        self.fingerprint = fingerprint
        self.fallback = fallback
        self.converged = converged
        self.iterations = iterations
        self._kw_index = {k: i for i, k in enumerate(keyword_basis)}
        self._rd_index = {r: i for i, r in enumerate(reader_basis)}
        self._training_coords: dict[str, DocVector] = {}

    # -- features ------------------------------------------------------------

    def raw_features(self, corpus: Corpus, doc: Document) -> np.ndarray:
        """Weighted, block-normalized feature vector, exactly as at training time."""
        kw = np.zeros(len(self.keyword_basis))
        for ref in corpus.known_references(doc.id):
            for keyword in corpus.docs[ref].keywords:
                idx = self._kw_index.get(keyword)
                if idx is not None:
                    kw[idx] += 1.0
        rd = np.zeros(len(self.reader_basis))
        for reader in corpus.readers_in_window(doc.id, self.trained_at, self.window_days):
            idx = self._rd_index.get(reader)
            if idx is not None:
                rd[idx] = 1.0
        kw_norm = np.linalg.norm(kw)
        rd_norm = np.linalg.norm(rd)
        if kw_norm > 0:
            kw = kw / kw_norm * self.keyword_weight
        if rd_norm > 0:
            rd = rd / rd_norm * self.reader_weight
        return np.concatenate([kw, rd])

    def project(self, corpus: Corpus, doc_id: str) -> DocVector:
        """Coordinates of any document (not only training docs) in the space."""
        doc = corpus.require(doc_id)
        x = self.raw_features(corpus, doc)
        if not np.any(x):
            return DocVector(doc_id, np.zeros(0), 0.0)
        y = x if self.fallback else self.components.T @ x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return DocVector(doc_id, np.zeros(0), 0.0)
        return DocVector(doc_id, y / norm, norm)

    def training_vector(self, corpus: Corpus, doc_id: str) -> DocVector:
        vec = self._training_coords.get(doc_id)
        if vec is None:
            vec = self.project(corpus, doc_id)
            self._training_coords[doc_id] = vec
        return vec

    def captured_variance(self, corpus: Corpus) -> float:
        """Variance of the centered training matrix retained by the components."""
        x = np.stack([self.raw_features(corpus, corpus.docs[d]) for d in self.trained_on])
        xc = x - x.mean(axis=0)
        denom = max(len(self.trained_on) - 1, 1)
        proj = xc @ self.components
        return float(np.sum(proj * proj) / denom)

    # -- persistence -----------------------------------------------------------

    def to_payload(self) -> dict:
        return {
            "dims": self.dims,
            "keyword_basis": list(self.keyword_basis),
            "reader_basis": list(self.reader_basis),
            "keyword_weight": self.keyword_weight,
            "reader_weight": self.reader_weight,
            "mean": self.mean.tolist(),
            "components": self.components.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "trained_on": list(self.trained_on),
            "trained_at": format_instant(self.trained_at),
            "window_days": self.window_days,
            "fingerprint": self.fingerprint,
            "fallback": self.fallback,
            "converged": self.converged,
            "iterations": self.iterations,
        }

    @classmethod
    def from_payload(cls, payload: dict, expected_fingerprint: str | None = None) -> "SpaceModel | None":
        """Rebuild a persisted model; a fingerprint mismatch returns None to force retraining."""
        if expected_fingerprint is not None and payload.get("fingerprint") != expected_fingerprint:
            return None
        return cls(
            dims=payload["dims"],
            keyword_basis=tuple(payload["keyword_basis"]),
            reader_basis=tuple(payload["reader_basis"]),
            keyword_weight=payload["keyword_weight"],
            reader_weight=payload["reader_weight"],
            mean=np.array(payload["mean"], dtype=np.float64),
            components=np.array(payload["components"], dtype=np.float64),
            eigenvalues=np.array(payload["eigenvalues"], dtype=np.float64),
            trained_on=tuple(payload["trained_on"]),
            trained_at=parse_instant(payload["trained_at"]),
            window_days=payload["window_days"],
            fingerprint=payload["fingerprint"],
            fallback=payload["fallback"],
            converged=payload["converged"],
            iterations=payload["iterations"],
        )


def training_candidates(corpus: Corpus, now: datetime, cfg: Config) -> list[Document]:
    recency_days = round(cfg.space_recency_years * 365.25)
    floor = now.date() - timedelta(days=recency_days)
    return [
        d
        for d in corpus.docs.values()
        if cfg.is_major(d.journal) and floor <= d.pub_date <= now.date()
    ]


def build_space(corpus: Corpus, now: datetime, cfg: Config | None = None) -> SpaceModel:
    """Train the reduced space on recent major-journal documents.

    Deterministic given (corpus, now, config): seeded start, fixed iteration
    cap, canonical eigenvector signs. Raises TrainingError when fewer
    feature-bearing training documents exist than requested dimensions.
    """
    cfg = cfg or Config()
    m = cfg.space_dims
    candidates = training_candidates(corpus, now, cfg)
    window_days = round(cfg.space_recency_years * 365.25)

    keyword_basis = sorted(
        {
            kw
            for doc in candidates
            for ref in corpus.known_references(doc.id)
            for kw in corpus.docs[ref].keywords
        }
    )
    reader_basis = sorted(
        scientist_ids(
            corpus,
            now,
            cfg.scientist_window_days,
            cfg.scientist_min_docs,
            cfg.scientist_min_days,
        )
    )

    probe = SpaceModel(
        dims=m,
        keyword_basis=tuple(keyword_basis),
        reader_basis=tuple(reader_basis),
        keyword_weight=cfg.space_keyword_weight,
        reader_weight=cfg.space_reader_weight,
        mean=np.zeros(len(keyword_basis) + len(reader_basis)),
        components=np.zeros((len(keyword_basis) + len(reader_basis), 0)),
        eigenvalues=np.zeros(0),
        trained_on=(),
        trained_at=now,
        window_days=window_days,
        fingerprint=cfg.space_fingerprint(),
        fallback=True,
        converged=True,
        iterations=0,
    )

    rows = []
    kept_ids = []
    for doc in candidates:  # corpus.docs is id-sorted, so this order is canonical
        x = probe.raw_features(corpus, doc)
        if np.any(x):
            rows.append(x)
            kept_ids.append(doc.id)
    if len(rows) < m:
        raise TrainingError(
            f"vector space needs at least {m} feature-bearing training documents; "
            f"found {len(rows)} usable of {len(candidates)} recent major-journal candidates"
        )

    x = np.stack(rows)
    n, feature_dim = x.shape
    mean = x.mean(axis=0)
    xc = x - mean
    denom = max(n - 1, 1)
    total_variance = float(np.sum(xc * xc) / denom)

    def cov_apply(q: np.ndarray) -> np.ndarray:
        return xc.T @ (xc @ q) / denom

    # the iteration can only ever find as many directions as the feature space has
    k = min(m, feature_dim)
    rng = np.random.RandomState(cfg.space_seed)
    q, _ = np.linalg.qr(rng.standard_normal((feature_dim, k)))
    prev = np.zeros(k)
    converged = False
    iterations = 0
    for iterations in range(1, cfg.space_eigen_max_iter + 1):
        z = cov_apply(q)
        q, _ = np.linalg.qr(z)
        estimates = np.einsum("dm,dm->m", q, cov_apply(q))
        if np.max(np.abs(estimates - prev)) < cfg.space_eigen_tol:
            converged = True
            break
        prev = estimates

    # Rayleigh-Ritz: rotate the converged subspace onto actual eigenvectors.
    ritz = q.T @ cov_apply(q)
    ritz = (ritz + ritz.T) / 2.0
    eigvals, eigvecs = _jacobi_eigh(ritz)
    order = np.argsort(-eigvals)
    eigvals = eigvals[order]
    components = _fix_signs(q @ eigvecs[:, order])

    rank_floor = max(total_variance, 1.0) * 1e-12
    fallback = bool(np.sum(eigvals > rank_floor) < m)

    model = SpaceModel(
        dims=m,
        keyword_basis=tuple(keyword_basis),
        reader_basis=tuple(reader_basis),
        keyword_weight=cfg.space_keyword_weight,
        reader_weight=cfg.space_reader_weight,
        mean=mean,
        components=components,
        eigenvalues=eigvals,
        trained_on=tuple(kept_ids),
        trained_at=now,
        window_days=window_days,
        fingerprint=cfg.space_fingerprint(),
        fallback=fallback,
        converged=converged,
        iterations=iterations,
    )
    for doc_id in kept_ids:
        model.training_vector(corpus, doc_id)
    return model


def project(model: SpaceModel, corpus: Corpus, doc_id: str) -> DocVector:
    return model.project(corpus, doc_id)


def near_list(model: SpaceModel, corpus: Corpus, doc_id: str, size: int = 50) -> RankedList:
    """The nearest training-set documents by cosine in the reduced space."""
    vec = model.project(corpus, doc_id)
    if vec.is_null:
        raise NotRecommendableError(f"document {doc_id} has no features; not recommendable")
    scores: dict[str, float] = {}
    for other in model.trained_on:
        if other == doc_id:
            continue
        ov = model.training_vector(corpus, other)
        if ov.is_null:
            continue
        scores[other] = float(np.dot(vec.coords, ov.coords))
    mode = "raw-feature fallback" if model.fallback else f"{model.dims}-dim space"
    ranked = rank(corpus, scores, f"near[{doc_id}] {mode}")
    return ranked.truncated(size)
