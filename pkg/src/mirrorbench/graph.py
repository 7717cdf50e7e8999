"""Undirected simple graphs stored as CSR arrays, plus structural primitives."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph
from scipy.sparse.linalg import eigsh

from . import kernels
from .errors import SpectrumTooLarge

COMBINATORIAL = "combinatorial_laplacian"
NORMALIZED = "normalized_laplacian"

DENSE_LIMIT = 3000
EXACT_APL_LIMIT = 5000


class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    ``indptr``/``indices`` hold a symmetric CSR adjacency with sorted rows.
    Use :meth:`from_arrays` or :func:`from_edge_list` to build one.
    """

    __slots__ = ("indptr", "indices", "_cache")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self._cache = {}

    @classmethod
    def from_arrays(cls, n: int, u, v) -> "Graph":
        """Build from endpoint arrays on a fixed node set; drops loops and duplicates."""
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise ValueError("edge endpoint outside [0, n)")
        keep = u != v
        u, v = u[keep], v[keep]
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        if len(lo):
            key = np.unique(lo * n + hi)
            lo, hi = key // n, key % n
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(indptr, cols)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def degrees(self) -> np.ndarray:
        if "deg" not in self._cache:
            d = np.diff(self.indptr)
            d.setflags(write=False)
            self._cache["deg"] = d
        return self._cache["deg"]

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v``, lexicographically sorted."""
        rows = np.repeat(np.arange(self.n), self.degrees())
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def relabel(self, perm) -> "Graph":
        """Copy with node ``i`` renamed to ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        e = self.edges()
        return Graph.from_arrays(self.n, perm[e[:, 0]], perm[e[:, 1]])

    def cached(self, key, fn):
        """Memoize a per-graph descriptor; safe because graphs are immutable."""
        try:
            return self._cache[key]
        except KeyError:
            val = fn(self)
            self._cache[key] = val
            return val

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.indptr, other.indptr)
        )

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def from_edge_list(pairs: Iterable[Sequence[int]]) -> Graph:
    """Graph from ``(u, v)`` pairs; ids are compacted in order of first appearance."""
    flat = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    if flat.size == 0:
        return Graph.empty(0)
    if flat.min() < 0:
        raise ValueError("node ids must be non-negative")
    seq = flat.ravel()
    uniq, first = np.unique(seq, return_index=True)
    order = np.argsort(first, kind="stable")
    new_id = np.empty(len(uniq), dtype=np.int64)
    new_id[order] = np.arange(len(uniq))
    compact = new_id[np.searchsorted(uniq, seq)].reshape(-1, 2)
    return Graph.from_arrays(len(uniq), compact[:, 0], compact[:, 1])


# ---------------------------------------------------------------------------
# edge-list files
# ---------------------------------------------------------------------------


def read_edge_list(path) -> Graph:
    """Read a whitespace edge list.

    ``#`` lines and blank lines are skipped.  A ``# nodes: N`` header, as
    written by :func:`write_edge_list`, keeps isolated nodes and the original
    ids.  Without it, ids are compacted in increasing order.
    """
    n_header = None
    us, vs = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                body = s[1:].strip()
                if body.startswith("nodes:"):
                    n_header = int(body.split(":", 1)[1])
                continue
            parts = s.split()
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected two node ids")
            u, v = int(parts[0]), int(parts[1])
            if u < 0 or v < 0:
                raise ValueError(f"{path}:{lineno}: negative node id")
            us.append(u)
            vs.append(v)
    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    if n_header is not None:
        return Graph.from_arrays(n_header, u, v)
    if not len(u):
        return Graph.empty(0)
    uniq, inv = np.unique(np.concatenate([u, v]), return_inverse=True)
    return Graph.from_arrays(len(uniq), inv[: len(u)], inv[len(u):])


def write_edge_list(g: Graph, path) -> None:
    e = g.edges()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# nodes: {g.n}\n")
        for u, v in e:
            fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# structural primitives
# ---------------------------------------------------------------------------


def degree_histogram(g: Graph) -> dict[int, int]:
    vals, counts = np.unique(g.degrees(), return_counts=True)
    return {int(d): int(c) for d, c in zip(vals, counts)}


def density(g: Graph) -> float:
    n = g.n
    if n < 2:
        return 0.0
    return 2.0 * g.m / (n * (n - 1))


@dataclass(frozen=True)
class PageRank:
    scores: np.ndarray
    converged: bool
    iterations: int


def pagerank(g: Graph, damping: float = 0.85, tol: float = 1e-8, max_iter: int = 100) -> PageRank:
    """Power iteration on the random walk; isolated nodes spread their mass uniformly."""
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie in (0, 1)")
    n = g.n
    if n == 0:
        return PageRank(np.zeros(0), True, 0)
    deg = g.degrees().astype(np.float64)
    dangling = deg == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / deg[~dangling]
    adj = g.adjacency()
    x = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        spread = adj @ (x * inv)
        x_new = damping * spread + (damping * x[dangling].sum() + 1.0 - damping) / n
        x_new /= x_new.sum()
        err = np.abs(x_new - x).sum()
        x = x_new
        if err < tol:
            return PageRank(x, True, it)
    return PageRank(x, False, max_iter)


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source``; unreachable nodes get ``-1``."""
    if not 0 <= source < g.n:
        raise IndexError("source out of range")
    return kernels.bfs_distances(g.indptr, g.indices, np.int64(source))


def connected_components(g: Graph) -> np.ndarray:
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    _, labels = csgraph.connected_components(g.adjacency(), directed=False)
    # relabel in order of lowest member so labels do not depend on scipy internals
    _, first = np.unique(labels, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[labels]


def edge_support(g: Graph) -> np.ndarray:
    """Triangles through each CSR entry ``(u, indices[p])``."""
    return g.cached("support", lambda h: kernels.edge_support(h.indptr, h.indices))


def node_triangles(g: Graph) -> np.ndarray:
    def compute(h):
        rows = np.repeat(np.arange(h.n), h.degrees())
        return np.bincount(rows, weights=edge_support(h), minlength=h.n).astype(np.int64) // 2

    return g.cached("node_tri", compute)


def count_triangles(g: Graph) -> int:
    return int(edge_support(g).sum() // 6)


def local_clustering(g: Graph) -> np.ndarray:
    deg = g.degrees().astype(np.float64)
    tri = node_triangles(g).astype(np.float64)
    out = np.zeros(g.n)
    ok = deg >= 2
    out[ok] = 2.0 * tri[ok] / (deg[ok] * (deg[ok] - 1.0))
    return out


def average_clustering(g: Graph) -> float:
    if g.n == 0:
        return 0.0
    return float(local_clustering(g).mean())


@dataclass(frozen=True)
class PathStats:
    average: float
    pairs: int
    sampled: bool

    @property
    def defined(self) -> bool:
        return self.pairs > 0


def shell_sizes(g: Graph, sources=None):
    """BFS shell sizes for every source; see :func:`kernels.shell_sizes_nb`."""
    if sources is None:
        return g.cached(
            "shells",
            lambda h: kernels.shell_sizes(h.indptr, h.indices, np.arange(h.n, dtype=np.int64)),
        )
    return kernels.shell_sizes(g.indptr, g.indices, np.asarray(sources, dtype=np.int64))


def path_length_stats(g: Graph, exact_limit: int = EXACT_APL_LIMIT, samples: int = 500,
                      seed: int = 0) -> PathStats:
    """Mean hop distance over ordered reachable pairs.

    Above ``exact_limit`` nodes, BFS runs from ``samples`` random sources and
    the result is flagged as sampled.
    """
    n = g.n
    sampled = n > exact_limit
    if sampled:
        rng = np.random.default_rng(seed)
        src = np.sort(rng.choice(n, size=min(samples, n), replace=False))
        offsets, sizes = shell_sizes(g, src)
    else:
        offsets, sizes = shell_sizes(g)
    src_of = np.repeat(np.arange(len(offsets) - 1), np.diff(offsets))
    level = np.arange(len(sizes)) - offsets[src_of]
    far = level > 0
    pairs = int(sizes[far].sum())
    if pairs == 0:
        return PathStats(0.0, 0, sampled)
    return PathStats(float((level[far] * sizes[far]).sum() / pairs), pairs, sampled)


def average_path_length(g: Graph) -> float:
    return path_length_stats(g).average


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    matrix_kind: str
    truncated: bool = False


def laplacian(g: Graph, kind: str = COMBINATORIAL) -> sp.csr_matrix:
    adj = g.adjacency()
    deg = g.degrees().astype(np.float64)
    if kind == COMBINATORIAL:
        return (sp.diags(deg) - adj).tocsr()
    if kind == NORMALIZED:
        inv_sqrt = np.zeros(g.n)
        ok = deg > 0
        inv_sqrt[ok] = 1.0 / np.sqrt(deg[ok])
        # isolated nodes keep an all-zero row
        d = sp.diags(inv_sqrt)
        return (sp.diags(ok.astype(np.float64)) - d @ adj @ d).tocsr()
    raise ValueError(f"unknown matrix kind {kind!r}")


def laplacian_spectrum(g: Graph, kind: str = COMBINATORIAL, dense_limit: int = DENSE_LIMIT,
                       top: int | None = None) -> SpectrumResult:
    """Laplacian eigenvalues sorted descending.

    With ``top=None`` every eigenvalue is computed by a dense symmetric
    solver, which is refused above ``dense_limit`` nodes.  With ``top=r`` the
    r largest come from Lanczos iteration (or the dense solve when small).
    """
    n = g.n
    if top is None and n > dense_limit:
        raise SpectrumTooLarge(
            f"graph has {n} nodes > dense limit {dense_limit}; pass top=r for a truncated spectrum"
        )
    if kind not in (COMBINATORIAL, NORMALIZED):
        raise ValueError(f"unknown matrix kind {kind!r}")
    if n == 0:
        return SpectrumResult(np.zeros(0), kind, top is not None)
    lap = laplacian(g, kind)
    if n <= dense_limit or (top is not None and top >= n - 1):
        vals = np.linalg.eigvalsh(lap.toarray())[::-1]
        if top is not None:
            vals = vals[:top]
    else:
        vals = eigsh(lap.astype(np.float64), k=top, which="LA", return_eigenvectors=False,
                     v0=np.random.default_rng(0).random(n), tol=0,
                     ncv=min(n, max(2 * top + 1, 20)))
        vals = np.sort(vals)[::-1]
    return SpectrumResult(np.ascontiguousarray(vals), kind, top is not None)
