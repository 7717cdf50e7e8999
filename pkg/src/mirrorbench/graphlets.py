"""Induced counts of the nine connected graphlets on 2-4 nodes."""
from itertools import combinations

import numpy as np

from . import kernels
from .graph import Graph, edge_support, node_triangles

GRAPHLET_NAMES = (
    "edge",
    "wedge",
    "triangle",
    "path4",
    "star3",
    "cycle4",
    "tailed_triangle",
    "diamond",
    "clique4",
)


def _comb2(x):
    return x * (x - 1) // 2


def _comb3(x):
    return x * (x - 1) * (x - 2) // 6


def graphlet_counts(g: Graph) -> np.ndarray:
    """Induced graphlet counts in ``GRAPHLET_NAMES`` order (int64).

    Non-induced 4-node copies come from degree, edge-triangle and codegree
    tallies; the induced counts then follow by inverting the containment
    relations, largest graphlet first.
    """
    return g.cached("graphlets", _graphlet_counts).copy()


def _graphlet_counts(g: Graph) -> np.ndarray:
    deg = g.degrees().astype(np.int64)
    support = edge_support(g)
    tri_v = node_triangles(g)
    rows = np.repeat(np.arange(g.n), deg)
    upper = rows < g.indices
    eu, ev, te = rows[upper], g.indices[upper], support[upper]

    m = int(g.m)
    triangles = int(support.sum() // 6)
    wedges_all = int(_comb2(deg).sum())

    star_copies = int(_comb3(deg).sum())
    path_copies = int(((deg[eu] - 1) * (deg[ev] - 1)).sum()) - 3 * triangles
    tailed_copies = int((tri_v * (deg - 2)).sum())
    diamond_copies = int(_comb2(te).sum())
    cycle_copies = int(kernels.cycle4_count(g.indptr, g.indices))
    k4 = int(kernels.clique4_count(g.indptr, g.indices))

    diamond = diamond_copies - 6 * k4
    cycle = cycle_copies - diamond - 3 * k4
    tailed = tailed_copies - 4 * diamond - 12 * k4
    path = path_copies - 2 * tailed - 4 * cycle - 6 * diamond - 12 * k4
    star = star_copies - tailed - 2 * diamond - 4 * k4
    wedge = wedges_all - 3 * triangles

    out = np.array([m, wedge, triangles, path, star, cycle, tailed, diamond, k4], dtype=np.int64)
    out.setflags(write=False)
    return out


_SIG3 = {2: 1, 3: 2}
# (edge count, sorted degree sequence) identifies every connected 4-node graph
_SIG4 = {
    (3, (1, 1, 2, 2)): 3,
    (3, (1, 1, 1, 3)): 4,
    (4, (2, 2, 2, 2)): 5,
    (4, (1, 2, 2, 3)): 6,
    (5, (2, 2, 3, 3)): 7,
    (6, (3, 3, 3, 3)): 8,
}


def graphlet_counts_bruteforce(g: Graph) -> np.ndarray:
    """Reference counts by enumerating every 3- and 4-node subset."""
    n = g.n
    adj = np.zeros((n, n), dtype=bool)
    e = g.edges()
    adj[e[:, 0], e[:, 1]] = True
    adj[e[:, 1], e[:, 0]] = True
    out = np.zeros(9, dtype=np.int64)
    out[0] = len(e)
    for trio in combinations(range(n), 3):
        sub = adj[np.ix_(trio, trio)]
        k = int(sub.sum()) // 2
        if k in _SIG3:
            out[_SIG3[k]] += 1
    for quad in combinations(range(n), 4):
        sub = adj[np.ix_(quad, quad)]
        degs = tuple(sorted(int(x) for x in sub.sum(axis=1)))
        key = (sum(degs) // 2, degs)
        if key in _SIG4:
            out[_SIG4[key]] += 1
    return out
