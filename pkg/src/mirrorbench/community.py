"""Greedy modularity agglomeration (Clauset-Newman-Moore)."""
import heapq

import numpy as np

from .graph import Graph


def detect_communities(g: Graph) -> np.ndarray:
    """Block id per node, dense from 0 in order of each block's lowest node.

    Merges the pair of adjacent communities with the largest modularity gain
    until no merge gains.  Gains are compared as the exact integer
    ``2m * e_ij - K_i * K_j`` (proportional to dQ), and ties go to the
    lexicographically smallest ``(i, j)``; the merged block keeps id ``i``.
    """
    n = g.n
    if g.m == 0:
        return np.arange(n, dtype=np.int64)
    two_m = 2 * g.m
    K = [int(d) for d in g.degrees()]
    links = [dict() for _ in range(n)]
    for u, v in g.edges():
        u, v = int(u), int(v)
        links[u][v] = 1
        links[v][u] = 1
    version = [0] * n
    alive = [True] * n
    parent = list(range(n))

    heap = []
    for i in range(n):
        for j, e in links[i].items():
            if i < j:
                heap.append((-(two_m * e - K[i] * K[j]), i, j, 0, 0))
    heapq.heapify(heap)

    while heap:
        neg, i, j, vi, vj = heapq.heappop(heap)
        if not (alive[i] and alive[j]) or version[i] != vi or version[j] != vj:
            continue
        if neg >= 0:
            break
        # fold j into i
        for x, e in links[j].items():
            if x == i:
                continue
            links[i][x] = links[i].get(x, 0) + e
            del links[x][j]
            links[x][i] = links[i][x]
        del links[i][j]
        links[j] = {}
        alive[j] = False
        parent[j] = i
        K[i] += K[j]
        version[i] += 1
        # only pairs touching i changed score
        for x, e in links[i].items():
            lo, hi = (i, x) if i < x else (x, i)
            heapq.heappush(heap, (-(two_m * e - K[lo] * K[hi]), lo, hi, version[lo], version[hi]))

    root = np.array(parent, dtype=np.int64)
    # path compression: parents always point at a lower-or-equal id chain
    for v in range(n):
        r = v
        while root[r] != r:
            r = root[r]
        root[v] = r
    _, first, inv = np.unique(root, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inv]


def modularity(g: Graph, labels) -> float:
    labels = np.asarray(labels)
    if g.m == 0:
        return 0.0
    e = g.edges()
    two_m = 2.0 * g.m
    inside = np.sum(labels[e[:, 0]] == labels[e[:, 1]]) / g.m
    kb = np.bincount(labels, weights=g.degrees().astype(float))
    return float(inside - np.sum((kb / two_m) ** 2))
