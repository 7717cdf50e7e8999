"""Synthetic source graphs."""
from collections import deque

import numpy as np

from .graph import Graph


def make_clique_ring(num_cliques: int, clique_size: int) -> Graph:
    """Ring of ``num_cliques`` copies of K_s.

    Clique t occupies ids ``t*s .. t*s+s-1``.  Its local node 1 (exit) links
    to local node 0 (entry) of clique t+1, wrapping around.
    """
    if num_cliques < 3 or clique_size < 2:
        raise ValueError("need num_cliques >= 3 and clique_size >= 2")
    s = clique_size
    iu, ju = np.triu_indices(s, k=1)
    base = np.arange(num_cliques)[:, None] * s
    u = (base + iu).ravel()
    v = (base + ju).ravel()
    exits = np.arange(num_cliques) * s + 1
    entries = (np.arange(num_cliques) + 1) % num_cliques * s
    return Graph.from_arrays(num_cliques * s, np.concatenate([u, exits]),
                             np.concatenate([v, entries]))


def make_random_tree(target_nodes: int, seed: int) -> Graph:
    """Breadth-first tree where each expanded node gets 2, 3 or 4 children.

    Growth stops at exactly ``target_nodes``; the last expanded node keeps
    only the children that fit.
    """
    if target_nodes < 1:
        raise ValueError("target_nodes must be >= 1")
    rng = np.random.default_rng(seed)
    parents = []
    queue = deque([0])
    count = 1
    while count < target_nodes:
        p = queue.popleft()
        kids = int(rng.integers(2, 5))
        for _ in range(min(kids, target_nodes - count)):
            parents.append(p)
            queue.append(count)
            count += 1
    children = np.arange(1, count)
    return Graph.from_arrays(count, np.asarray(parents, dtype=np.int64), children)


def make_power_law(n: int, attach: int, seed: int) -> Graph:
    """Preferential-attachment graph: each new node links to ``attach`` earlier nodes."""
    if attach < 1 or n <= attach:
        raise ValueError("need 1 <= attach < n")
    rng = np.random.default_rng(seed)
    # endpoint pool: picking uniformly from it is degree-proportional
    pool = np.empty(2 * attach * n, dtype=np.int64)
    size = 0
    us, vs = [], []
    targets = list(range(attach))
    for new in range(attach, n):
        for t in targets:
            us.append(new)
            vs.append(t)
            pool[size] = new
            pool[size + 1] = t
            size += 2
        chosen = set()
        while len(chosen) < attach and new + 1 < n:
            chosen.add(int(pool[rng.integers(0, size)]))
        targets = sorted(chosen)
    return Graph.from_arrays(n, np.asarray(us), np.asarray(vs))
