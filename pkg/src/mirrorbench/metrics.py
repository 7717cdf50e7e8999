"""Graph comparison metrics.

All JS divergences use base-2 logs, so they fall in [0, 1].  Metric ids used
by the CLI and CSV files live in :data:`METRICS`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .errors import UndefinedPortrait
from .graph import (
    COMBINATORIAL,
    DENSE_LIMIT,
    NORMALIZED,
    Graph,
    average_clustering,
    laplacian,
    laplacian_spectrum,
    pagerank,
    path_length_stats,
    shell_sizes,
)
from .graphlets import graphlet_counts

PAGERANK_BINS = 100
NETLSD_TIMESCALES = np.logspace(-2, 2, 250)
TRUNCATED_TOP = 500


@dataclass(frozen=True)
class Distribution:
    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support)
        p = np.asarray(self.probs, dtype=np.float64)
        if s.shape != p.shape:
            raise ValueError("support and probs differ in length")
        if len(s) > 1 and np.any(np.diff(s) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(p < 0) or (len(p) and abs(p.sum() - 1.0) > 1e-12):
            raise ValueError("probs must be non-negative and sum to 1")
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_counts(cls, support, counts) -> "Distribution":
        c = np.asarray(counts, dtype=np.float64)
        return cls(np.asarray(support), c / c.sum())


def _aligned(p: Distribution, q: Distribution):
    support = np.union1d(p.support, q.support)
    a = np.zeros(len(support))
    b = np.zeros(len(support))
    a[np.searchsorted(support, p.support)] = p.probs
    b[np.searchsorted(support, q.support)] = q.probs
    return a, b


def _js(a: np.ndarray, b: np.ndarray) -> float:
    mid = 0.5 * (a + b)

    def kl(x):
        nz = x > 0
        return float(np.sum(x[nz] * np.log2(x[nz] / mid[nz])))

    val = 0.5 * kl(a) + 0.5 * kl(b)
    return min(1.0, max(0.0, val))


def js_divergence(p, q) -> float:
    """Base-2 Jensen-Shannon divergence.

    Accepts two :class:`Distribution` objects (supports are merged) or two
    equal-length probability vectors.
    """
    if isinstance(p, Distribution) and isinstance(q, Distribution):
        a, b = _aligned(p, q)
    else:
        a = np.asarray(p, dtype=np.float64)
        b = np.asarray(q, dtype=np.float64)
        if a.shape != b.shape:
            raise ValueError("vectors differ in length")
    return _js(a, b)


# ---------------------------------------------------------------------------
# degree and PageRank
# ---------------------------------------------------------------------------


def degree_distribution(g: Graph) -> Distribution:
    counts = np.bincount(g.degrees())
    return Distribution.from_counts(np.arange(len(counts)), counts)


def degree_js(g1: Graph, g2: Graph) -> float:
    if g1.n == 0 or g2.n == 0:
        raise ValueError("degree distribution of an empty graph")
    return js_divergence(degree_distribution(g1), degree_distribution(g2))


def pagerank_scores(g: Graph) -> np.ndarray:
    return g.cached("pagerank", lambda h: pagerank(h).scores)


def pagerank_js(g1: Graph, g2: Graph, bins: int = PAGERANK_BINS) -> float:
    """JS of PageRank histograms on equal-width bins over [0, max PR of both]."""
    if g1.n == 0 or g2.n == 0:
        raise ValueError("PageRank of an empty graph")
    x1, x2 = pagerank_scores(g1), pagerank_scores(g2)
    top = max(x1.max(), x2.max())

    def hist(x):
        idx = np.minimum((x / top * bins).astype(np.int64), bins - 1)
        c = np.bincount(idx, minlength=bins).astype(np.float64)
        return c / c.sum()

    return _js(hist(x1), hist(x2))


# ---------------------------------------------------------------------------
# portraits
# ---------------------------------------------------------------------------


def portrait(g: Graph) -> np.ndarray:
    """``B[l, k]`` = number of nodes with exactly ``k`` nodes at distance ``l``.

    Rows run over l = 0..max eccentricity, columns over k = 0..n; the k = 0
    column stays empty (only reachable shells are recorded).
    """
    return g.cached("portrait", _portrait)


def _portrait(g: Graph) -> np.ndarray:
    offsets, sizes = shell_sizes(g)
    if g.n == 0:
        return np.zeros((0, 1), dtype=np.int64)
    src_of = np.repeat(np.arange(g.n), np.diff(offsets))
    level = np.arange(len(sizes)) - offsets[src_of]
    B = np.zeros((int(level.max()) + 1, g.n + 1), dtype=np.int64)
    np.add.at(B, (level, sizes), 1)
    B.setflags(write=False)
    return B


def portrait_joint(g: Graph) -> np.ndarray:
    """Joint distribution ``P(l, k)`` proportional to ``k * B[l, k]``."""
    B = portrait(g)
    if g.m == 0:
        raise UndefinedPortrait(f"graph with n={g.n}, m={g.m} has no reachable pairs")
    w = B * np.arange(B.shape[1])[None, :]
    return w / w.sum()


def portrait_divergence(g1: Graph, g2: Graph) -> float:
    p, q = portrait_joint(g1), portrait_joint(g2)
    rows = max(p.shape[0], q.shape[0])
    cols = max(p.shape[1], q.shape[1])
    a = np.zeros((rows, cols))
    b = np.zeros((rows, cols))
    a[: p.shape[0], : p.shape[1]] = p
    b[: q.shape[0], : q.shape[1]] = q
    return _js(a.ravel(), b.ravel())


# ---------------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------------


def _spectrum(g: Graph, kind: str, top: int | None) -> np.ndarray:
    return g.cached(("spectrum", kind, top),
                    lambda h: laplacian_spectrum(h, kind, top=top).eigenvalues)


def lambda_distance(g1: Graph, g2: Graph, kind: str = COMBINATORIAL,
                    dense_limit: int = DENSE_LIMIT, top: int = TRUNCATED_TOP) -> float:
    """Euclidean distance between descending spectra, zero-padding the shorter.

    When either graph exceeds ``dense_limit`` nodes both spectra are cut to
    their ``top`` largest eigenvalues.
    """
    r = top if max(g1.n, g2.n) > dense_limit else None
    s1, s2 = _spectrum(g1, kind, r), _spectrum(g2, kind, r)
    size = max(len(s1), len(s2))
    a = np.zeros(size)
    b = np.zeros(size)
    a[: len(s1)] = s1
    b[: len(s2)] = s2
    return float(np.linalg.norm(a - b))


def _normalized_spectrum(g: Graph, dense_limit: int, edge: int) -> np.ndarray:
    """All normalized-Laplacian eigenvalues; above ``dense_limit`` the interior
    is filled by linear interpolation between the ``edge`` smallest and largest."""
    n = g.n
    if n <= dense_limit:
        return _spectrum(g, NORMALIZED, None)

    def compute(h):
        lap = laplacian(h, NORMALIZED)
        v0 = np.random.default_rng(0).random(n)
        hi = np.sort(eigsh(lap, k=edge, which="LA", return_eigenvectors=False, v0=v0, tol=0))
        # smallest of L are the largest of 2I - L
        shifted = 2.0 * sp.identity(n, format="csr") - lap
        lo = np.sort(2.0 - eigsh(shifted, k=edge, which="LA", return_eigenvectors=False, v0=v0, tol=0))
        mid = np.linspace(lo[-1], hi[0], n - 2 * edge + 2)[1:-1]
        return np.concatenate([lo, mid, hi])

    return g.cached(("netlsd_spectrum", edge), compute)


def netlsd_descriptor(g: Graph, timescales=NETLSD_TIMESCALES, dense_limit: int = DENSE_LIMIT,
                      edge: int = 150) -> np.ndarray:
    """Heat trace ``h(t) = sum_i exp(-t * lambda_i)`` on the normalized Laplacian."""
    lam = np.clip(_normalized_spectrum(g, dense_limit, edge), 0.0, 2.0)
    return np.exp(-np.outer(timescales, lam)).sum(axis=1)


def netlsd_distance(g1: Graph, g2: Graph) -> float:
    h1 = g1.cached("netlsd", netlsd_descriptor)
    h2 = g2.cached("netlsd", netlsd_descriptor)
    return float(np.linalg.norm(h1 - h2))


# ---------------------------------------------------------------------------
# graphlets
# ---------------------------------------------------------------------------


def graphlet_frequencies(g: Graph) -> np.ndarray:
    c = graphlet_counts(g).astype(np.float64)
    total = c.sum()
    return c / total if total > 0 else c


def rgfd(g1: Graph, g2: Graph, norm: str = "L1") -> float:
    diff = graphlet_frequencies(g1) - graphlet_frequencies(g2)
    if norm.upper() == "L1":
        return float(np.abs(diff).sum())
    if norm.upper() == "L2":
        return float(np.sqrt(diff @ diff))
    raise ValueError(f"unknown norm {norm!r}")


# ---------------------------------------------------------------------------
# PCA
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PcaResult:
    coords: np.ndarray  # (N, 2)
    weights: np.ndarray  # (2, dim)
    explained: np.ndarray  # variance along each component
    degenerate: bool


def pca_2d(vectors) -> PcaResult:
    """Project onto the top two principal axes of the mean-centered data.

    Each axis is signed so that its largest-magnitude weight is positive.
    """
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 2:
        raise ValueError("need at least two vectors of dimension >= 2")
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / (X.shape[0] - 1)
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1][:2]
    vals, vecs = np.maximum(vals[order], 0.0), vecs[:, order]
    for c in range(2):
        lead = np.argmax(np.abs(vecs[:, c]))
        if vecs[lead, c] < 0:
            vecs[:, c] = -vecs[:, c]
    if vals[0] <= 1e-15 * max(1.0, np.abs(X).max() ** 2):
        return PcaResult(np.zeros((X.shape[0], 2)), vecs.T, vals, True)
    return PcaResult(centered @ vecs, vecs.T, vals, False)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def _avg_cc_gap(g1: Graph, g2: Graph) -> float:
    c1 = g1.cached("avg_cc", average_clustering)
    c2 = g2.cached("avg_cc", average_clustering)
    return abs(c1 - c2)


def _avg_pl_gap(g1: Graph, g2: Graph) -> float:
    p1 = g1.cached("apl", path_length_stats).average
    p2 = g2.cached("apl", path_length_stats).average
    return abs(p1 - p2)


METRICS = {
    "degree-js": degree_js,
    "pagerank-js": pagerank_js,
    "portrait": portrait_divergence,
    "lambda": lambda_distance,
    "rgfd-l1": lambda g1, g2: rgfd(g1, g2, "L1"),
    "rgfd-l2": lambda g1, g2: rgfd(g1, g2, "L2"),
    "netlsd": netlsd_distance,
    "avg-cc": _avg_cc_gap,
    "avg-pl": _avg_pl_gap,
}

JS_METRICS = ("degree-js", "pagerank-js", "portrait")
SPECTRAL_METRICS = ("lambda", "netlsd")
NON_SPECTRAL_METRICS = tuple(m for m in METRICS if m not in SPECTRAL_METRICS)


def compare(g1: Graph, g2: Graph, metric: str) -> float:
    try:
        fn = METRICS[metric]
    except KeyError:
        raise ValueError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}") from None
    return fn(g1, g2)
