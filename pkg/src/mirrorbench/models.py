"""Fit-and-generate implementations of the five generative models.

Each model has ``fit_<model>(g) -> params`` and ``generate_<model>(params, seed) -> Graph``;
:func:`fit` and :func:`generate` dispatch on a model name.  Parameters
serialize to JSON via :func:`params_to_json` / :func:`params_from_json`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .community import detect_communities
from .errors import DegenerateInput, FitFailed, GenerationDegenerate
from .graph import Graph, count_triangles, degree_histogram, local_clustering

KRON_LO = 0.001
KRON_HI = 0.999
EXACT_KRON_MAX_K = 11
_ROW_BLOCK = 1 << 22


@dataclass(frozen=True)
class ErParams:
    n: int
    m: int
    model = "er"


@dataclass(frozen=True)
class ChungLuParams:
    weights: tuple
    model = "chung_lu"


@dataclass(frozen=True)
class SbmParams:
    assignment: tuple
    block_sizes: tuple
    block_edge_counts: tuple  # tuple of row tuples, symmetric
    model = "sbm"


@dataclass(frozen=True)
class KroneckerParams:
    initiator: tuple  # ((a, b), (b, c))
    k: int
    model = "kronecker"

    @property
    def abc(self):
        (a, b), (_, c) = self.initiator
        return a, b, c


@dataclass(frozen=True)
class BterParams:
    degree_counts: dict = field(hash=False)
    clustering_by_degree: dict = field(hash=False)
    model = "bter"


MODEL_ALIASES = {
    "er": "er",
    "erdos_renyi": "er",
    "chung-lu": "chung_lu",
    "chung_lu": "chung_lu",
    "cl": "chung_lu",
    "sbm": "sbm",
    "kron": "kronecker",
    "kronecker": "kronecker",
    "bter": "bter",
}


def canonical_model(name: str) -> str:
    try:
        return MODEL_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown model {name!r}") from None


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _choose_pairs(rng, npairs: int, p: float) -> np.ndarray:
    """Indices of pairs kept under independent Bernoulli(p) trials.

    Drawing a binomial count and then a uniform subset has the same law as
    one coin per pair, at O(edges) cost.
    """
    if npairs <= 0 or p <= 0.0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(npairs, dtype=np.int64)
    count = int(rng.binomial(npairs, p))
    return np.sort(rng.choice(npairs, size=count, replace=False)).astype(np.int64)


def _unrank_upper(idx: np.ndarray, n: int):
    """Map ranks of the pairs ``i < j`` (row-major) back to ``(i, j)``."""
    idx = np.asarray(idx, dtype=np.int64)
    total = n * (n - 1) // 2
    rev = total - 1 - idx
    # rev counts pairs from the end: row r from the bottom holds r+1 pairs
    r = ((np.sqrt(8.0 * rev + 1.0) - 1.0) // 2).astype(np.int64)
    # guard against float rounding at triangular-number boundaries
    r -= (r * (r + 1) // 2 > rev)
    r += ((r + 1) * (r + 2) // 2 <= rev)
    i = n - 2 - r
    row_start = i * n - i * (i + 1) // 2
    j = idx - row_start + i + 1
    return i, j


def _bernoulli_rows(n: int, rng, row_probs):
    """One Bernoulli trial per pair ``i < j``; ``row_probs(rows)`` gives an
    ``(len(rows), n)`` probability block."""
    us, vs = [], []
    step = max(1, _ROW_BLOCK // max(n, 1))
    cols = np.arange(n)
    for lo in range(0, n, step):
        rows = np.arange(lo, min(n, lo + step))
        probs = row_probs(rows)
        draws = rng.random(probs.shape)
        hit = (draws < probs) & (cols[None, :] > rows[:, None])
        r, c = np.nonzero(hit)
        us.append(rows[r])
        vs.append(c)
    if not us:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(us), np.concatenate(vs)


# ---------------------------------------------------------------------------
# Erdős–Rényi
# ---------------------------------------------------------------------------


def fit_er(g: Graph) -> ErParams:
    if g.n < 2:
        raise DegenerateInput("Erdős–Rényi needs at least two nodes")
    return ErParams(g.n, g.m)


def er_probability(p: ErParams) -> float:
    if p.n < 2:
        return 0.0
    return p.m / (p.n * (p.n - 1) / 2)


def generate_er(p: ErParams, seed) -> Graph:
    rng = _rng(seed)
    picks = _choose_pairs(rng, p.n * (p.n - 1) // 2, er_probability(p))
    i, j = _unrank_upper(picks, p.n)
    return Graph.from_arrays(p.n, i, j)


# ---------------------------------------------------------------------------
# Chung-Lu
# ---------------------------------------------------------------------------


def fit_chung_lu(g: Graph) -> ChungLuParams:
    if g.m == 0:
        raise DegenerateInput("Chung-Lu needs at least one edge")
    return ChungLuParams(tuple(float(d) for d in g.degrees()))


def _chung_lu_edges(w: np.ndarray, rng):
    total = w.sum()
    if total <= 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return _bernoulli_rows(len(w), rng,
                           lambda rows: np.minimum(1.0, w[rows, None] * w[None, :] / total))


def chung_lu_expected_edges(w) -> float:
    w = np.asarray(w, dtype=np.float64)
    total = w.sum()
    if total <= 0:
        return 0.0
    p = np.minimum(1.0, np.outer(w, w) / total)
    return float(np.triu(p, k=1).sum())


def generate_chung_lu(p: ChungLuParams, seed) -> Graph:
    w = np.asarray(p.weights, dtype=np.float64)
    u, v = _chung_lu_edges(w, _rng(seed))
    return Graph.from_arrays(len(w), u, v)


# ---------------------------------------------------------------------------
# stochastic block model
# ---------------------------------------------------------------------------


def fit_sbm(g: Graph) -> SbmParams:
    if g.m == 0:
        raise DegenerateInput("SBM needs at least one edge")
    blocks = detect_communities(g)
    nb = int(blocks.max()) + 1
    sizes = np.bincount(blocks, minlength=nb)
    e = g.edges()
    counts = np.zeros((nb, nb), dtype=np.int64)
    np.add.at(counts, (blocks[e[:, 0]], blocks[e[:, 1]]), 1)
    counts = counts + counts.T - np.diag(np.diag(counts))
    return SbmParams(
        assignment=tuple(int(b) for b in blocks),
        block_sizes=tuple(int(s) for s in sizes),
        block_edge_counts=tuple(tuple(int(x) for x in row) for row in counts),
    )


def sbm_probabilities(p: SbmParams) -> np.ndarray:
    sizes = np.asarray(p.block_sizes, dtype=np.float64)
    counts = np.asarray(p.block_edge_counts, dtype=np.float64)
    pairs = np.outer(sizes, sizes)
    np.fill_diagonal(pairs, sizes * (sizes - 1) / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        prob = np.where(pairs > 0, counts / pairs, 0.0)
    return np.clip(prob, 0.0, 1.0)


def generate_sbm(p: SbmParams, seed) -> Graph:
    rng = _rng(seed)
    assignment = np.asarray(p.assignment, dtype=np.int64)
    n = len(assignment)
    order = np.argsort(assignment, kind="stable")
    nb = len(p.block_sizes)
    starts = np.concatenate([[0], np.cumsum(p.block_sizes)])
    prob = sbm_probabilities(p)
    us, vs = [], []
    for r in range(nb):
        members_r = order[starts[r]:starts[r + 1]]
        nr = len(members_r)
        picks = _choose_pairs(rng, nr * (nr - 1) // 2, prob[r, r])
        if len(picks):
            i, j = _unrank_upper(picks, nr)
            us.append(members_r[i])
            vs.append(members_r[j])
        for s in range(r + 1, nb):
            members_s = order[starts[s]:starts[s + 1]]
            ns = len(members_s)
            picks = _choose_pairs(rng, nr * ns, prob[r, s])
            if len(picks):
                us.append(members_r[picks // ns])
                vs.append(members_s[picks % ns])
    if not us:
        return Graph.empty(n)
    return Graph.from_arrays(n, np.concatenate(us), np.concatenate(vs))


# ---------------------------------------------------------------------------
# stochastic Kronecker
# ---------------------------------------------------------------------------


def kron_expectations(a: float, b: float, c: float, k: int):
    """Closed-form expected (edges, wedges, triangles) for a 2x2 initiator."""
    s = a + 2 * b + c
    d = a + c
    edges = (s ** k - d ** k) / 2.0
    walks2 = (a + b) ** 2 + (b + c) ** 2
    wedges = walks2 ** k / 2.0 - edges
    trace3 = a ** 3 + 3 * b * b * (a + c) + c ** 3
    triangles = trace3 ** k / 6.0
    return edges, wedges, triangles


def kron_targets(g: Graph):
    deg = g.degrees().astype(np.float64)
    wedges = float((deg * (deg - 1) / 2).sum())
    return (max(float(g.m), 1.0), max(wedges, 1.0), max(float(count_triangles(g)), 1.0))


_KRON_STARTS = [
    (a, b, c)
    for a in (0.99, 0.9, 0.75, 0.6, 0.45)
    for (b, c) in ((0.5, 0.2), (0.7, 0.3), (0.3, 0.1), (0.6, 0.5))
]


def _kron_loss(x, k, log_targets):
    a, b, c = np.clip(x, KRON_LO, KRON_HI)
    pred = np.maximum(np.array(kron_expectations(a, b, c, k)), 1e-300)
    r = np.log(pred) - log_targets
    return float(r @ r)


def fit_kronecker_targets(targets, k: int) -> KroneckerParams:
    log_t = np.log(np.asarray(targets, dtype=np.float64))
    best = None
    for start in _KRON_STARTS:
        try:
            res = minimize(
                _kron_loss, np.array(start), args=(k, log_t), method="Nelder-Mead",
                bounds=[(KRON_LO, KRON_HI)] * 3,
                options={"xatol": 1e-6, "fatol": 1e-6, "maxiter": 4000},
            )
        except (ValueError, FloatingPointError):
            continue
        if not np.isfinite(res.fun):
            continue
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        raise FitFailed("every Kronecker restart failed")
    a, b, c = (float(v) for v in np.clip(best.x, KRON_LO, KRON_HI))
    if c > a:
        a, c = c, a
    return KroneckerParams(((a, b), (b, c)), k)


def fit_kronecker(g: Graph) -> KroneckerParams:
    if g.n < 4 or g.m < 1:
        raise DegenerateInput("Kronecker needs n >= 4 and at least one edge")
    k = max(1, math.ceil(math.log2(g.n)))
    return fit_kronecker_targets(kron_targets(g), k)


def kronecker_probabilities(p: KroneckerParams, rows, n_cols=None) -> np.ndarray:
    init = np.asarray(p.initiator, dtype=np.float64)
    n = 1 << p.k
    cols = np.arange(n if n_cols is None else n_cols)
    rows = np.asarray(rows)
    out = np.ones((len(rows), len(cols)))
    for level in range(p.k):
        out *= init[(rows[:, None] >> level) & 1, (cols[None, :] >> level) & 1]
    return out


def _kron_darts(p: KroneckerParams, rng):
    init = np.asarray(p.initiator, dtype=np.float64)
    total = init.sum()
    cell = (init / total).ravel()
    ndarts = int(rng.poisson(total ** p.k / 2.0))
    i = np.zeros(ndarts, dtype=np.int64)
    j = np.zeros(ndarts, dtype=np.int64)
    for level in range(p.k):
        q = rng.choice(4, size=ndarts, p=cell)
        i |= (q >> 1) << level
        j |= (q & 1) << level
    return i, j


def generate_kronecker(p: KroneckerParams, seed) -> Graph:
    rng = _rng(seed)
    n = 1 << p.k
    if p.k <= EXACT_KRON_MAX_K:
        u, v = _bernoulli_rows(n, rng, lambda rows: kronecker_probabilities(p, rows))
    else:
        u, v = _kron_darts(p, rng)
    return Graph.from_arrays(n, u, v)


# ---------------------------------------------------------------------------
# BTER
# ---------------------------------------------------------------------------


def fit_bter(g: Graph) -> BterParams:
    if g.m == 0:
        raise DegenerateInput("BTER needs at least one edge")
    deg = g.degrees()
    cc = local_clustering(g)
    clus = {}
    for d in np.unique(deg):
        clus[int(d)] = float(cc[deg == d].mean()) if d >= 2 else 0.0
    return BterParams(degree_histogram(g), clus)


def bter_blocks(p: BterParams):
    """Target degree per node and the phase-1 affinity blocks.

    Returns ``(degrees, blocks)`` with ``blocks`` a list of
    ``(start, stop, rho)`` over node ids sorted by degree.
    """
    degrees = np.concatenate(
        [np.full(c, d, dtype=np.int64) for d, c in sorted(p.degree_counts.items())]
    ) if p.degree_counts else np.zeros(0, dtype=np.int64)
    blocks = []
    i = int(np.searchsorted(degrees, 2))
    n = len(degrees)
    while i < n:
        d = int(degrees[i])
        stop = min(n, i + d + 1)
        rho = float(p.clustering_by_degree.get(d, 0.0)) ** (1.0 / 3.0)
        blocks.append((i, stop, rho))
        i = stop
    return degrees, blocks


def generate_bter(p: BterParams, seed) -> Graph:
    rng = _rng(seed)
    degrees, blocks = bter_blocks(p)
    n = len(degrees)
    excess = degrees.astype(np.float64)
    us, vs = [], []
    for start, stop, rho in blocks:
        size = stop - start
        picks = _choose_pairs(rng, size * (size - 1) // 2, rho)
        if len(picks):
            i, j = _unrank_upper(picks, size)
            us.append(start + i)
            vs.append(start + j)
        excess[start:stop] = np.maximum(0.0, degrees[start:stop] - rho * (size - 1))
    u2, v2 = _chung_lu_edges(excess, rng)
    us.append(u2)
    vs.append(v2)
    return Graph.from_arrays(n, np.concatenate(us), np.concatenate(vs))


# ---------------------------------------------------------------------------
# dispatch and serialization
# ---------------------------------------------------------------------------

_FITTERS = {
    "er": fit_er,
    "chung_lu": fit_chung_lu,
    "sbm": fit_sbm,
    "kronecker": fit_kronecker,
    "bter": fit_bter,
}

_GENERATORS = {
    "er": generate_er,
    "chung_lu": generate_chung_lu,
    "sbm": generate_sbm,
    "kronecker": generate_kronecker,
    "bter": generate_bter,
}


def fit(model: str, g: Graph):
    return _FITTERS[canonical_model(model)](g)


def generate(params, seed) -> Graph:
    """Generate from ``params``; raises :class:`GenerationDegenerate` when the
    result is too small to refit (no edges or fewer than four nodes)."""
    g = _GENERATORS[params.model](params, seed)
    if g.m == 0 or g.n < 4:
        raise GenerationDegenerate(f"{params.model} produced n={g.n}, m={g.m}")
    return g


def params_to_dict(p) -> dict:
    if isinstance(p, ErParams):
        return {"model": "er", "n": p.n, "m": p.m}
    if isinstance(p, ChungLuParams):
        return {"model": "chung_lu", "weights": list(p.weights)}
    if isinstance(p, SbmParams):
        return {
            "model": "sbm",
            "assignment": list(p.assignment),
            "block_sizes": list(p.block_sizes),
            "block_edge_counts": [list(r) for r in p.block_edge_counts],
        }
    if isinstance(p, KroneckerParams):
        return {"model": "kronecker", "initiator": [list(r) for r in p.initiator], "k": p.k}
    if isinstance(p, BterParams):
        return {
            "model": "bter",
            "degree_counts": {str(d): c for d, c in sorted(p.degree_counts.items())},
            "clustering_by_degree": {str(d): c for d, c in sorted(p.clustering_by_degree.items())},
        }
    raise TypeError(f"not a parameter object: {p!r}")


def params_from_dict(doc: dict):
    kind = canonical_model(doc["model"])
    if kind == "er":
        return ErParams(int(doc["n"]), int(doc["m"]))
    if kind == "chung_lu":
        return ChungLuParams(tuple(float(w) for w in doc["weights"]))
    if kind == "sbm":
        return SbmParams(
            tuple(int(x) for x in doc["assignment"]),
            tuple(int(x) for x in doc["block_sizes"]),
            tuple(tuple(int(x) for x in row) for row in doc["block_edge_counts"]),
        )
    if kind == "kronecker":
        (a, b), (b2, c) = doc["initiator"]
        if b != b2:
            raise ValueError("Kronecker initiator must be symmetric")
        return KroneckerParams(((float(a), float(b)), (float(b), float(c))), int(doc["k"]))
    return BterParams(
        {int(d): int(c) for d, c in doc["degree_counts"].items()},
        {int(d): float(c) for d, c in doc["clustering_by_degree"].items()},
    )


def params_to_json(p, **kw) -> str:
    return json.dumps(params_to_dict(p), **kw)


def params_from_json(text: str):
    return params_from_dict(json.loads(text))
