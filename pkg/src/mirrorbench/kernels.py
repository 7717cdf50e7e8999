"""Hot inner loops over CSR adjacency.

Every kernel exists twice: a numba version (``*_nb``) and a numpy/scipy
version (``*_np``).  The unsuffixed names dispatch on ``NUMBA_ENABLED``.
All kernels take ``indptr``/``indices`` of a symmetric CSR adjacency with
sorted rows and no self-loops.
"""
import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from ._accel import NUMBA_ENABLED, njit

__all__ = [
    "shell_sizes",
    "edge_support",
    "cycle4_count",
    "clique4_count",
    "bfs_distances",
]


def _adjacency(indptr, indices):
    n = len(indptr) - 1
    data = np.ones(len(indices), dtype=np.int64)
    return sp.csr_matrix((data, indices, indptr), shape=(n, n))


# ---------------------------------------------------------------------------
# single-source BFS
# ---------------------------------------------------------------------------


@njit
def bfs_distances_nb(indptr, indices, source):
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    dist[source] = 0
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return dist


def bfs_distances_np(indptr, indices, source):
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        starts = indptr[frontier]
        lengths = indptr[frontier + 1] - starts
        if lengths.sum() == 0:
            break
        # gather the concatenated neighbour ranges of the frontier
        offs = np.repeat(starts - np.cumsum(lengths) + lengths, lengths)
        nbrs = indices[offs + np.arange(lengths.sum())]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        dist[nbrs] = level
        frontier = nbrs
    return dist


# ---------------------------------------------------------------------------
# all-sources shell sizes (portrait and path lengths)
# ---------------------------------------------------------------------------


@njit
def shell_sizes_nb(indptr, indices, sources):
    """For each source, the number of nodes at distance 0, 1, ..., ecc.

    Returns ``(offsets, sizes)``; the shells of ``sources[i]`` are
    ``sizes[offsets[i]:offsets[i + 1]]``.
    """
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    offsets = np.zeros(len(sources) + 1, dtype=np.int64)
    cap = max(16, 4 * len(sources))
    sizes = np.empty(cap, dtype=np.int64)
    pos = 0
    for si in range(len(sources)):
        s = sources[si]
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0:
                    dist[v] = du
                    queue[tail] = v
                    tail += 1
        ecc = dist[queue[tail - 1]]
        if pos + ecc + 1 > cap:
            while pos + ecc + 1 > cap:
                cap *= 2
            grown = np.empty(cap, dtype=np.int64)
            grown[:pos] = sizes[:pos]
            sizes = grown
        for lv in range(ecc + 1):
            sizes[pos + lv] = 0
        for q in range(tail):
            sizes[pos + dist[queue[q]]] += 1
            dist[queue[q]] = -1
        pos += ecc + 1
        offsets[si + 1] = pos
    return offsets, sizes[:pos].copy()


def shell_sizes_np(indptr, indices, sources, chunk=256):
    adj = _adjacency(indptr, indices)
    sources = np.asarray(sources, dtype=np.int64)
    offsets = np.zeros(len(sources) + 1, dtype=np.int64)
    parts = []
    pos = 0
    for lo in range(0, len(sources), chunk):
        block = csgraph.shortest_path(
            adj, method="D", unweighted=True, indices=sources[lo:lo + chunk]
        )
        for row_i, row in enumerate(block):
            d = row[np.isfinite(row)].astype(np.int64)
            counts = np.bincount(d)
            parts.append(counts)
            pos += len(counts)
            offsets[lo + row_i + 1] = pos
    sizes = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return offsets, sizes.astype(np.int64)


# ---------------------------------------------------------------------------
# triangles per CSR entry
# ---------------------------------------------------------------------------


@njit
def edge_support_nb(indptr, indices):
    """Number of common neighbours for every CSR entry ``(u, indices[p])``."""
    n = len(indptr) - 1
    out = np.zeros(len(indices), dtype=np.int64)
    for u in range(n):
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if v < u:
                continue
            # sorted-list intersection of N(u) and N(v)
            i = indptr[u]
            j = indptr[v]
            iend = indptr[u + 1]
            jend = indptr[v + 1]
            c = 0
            while i < iend and j < jend:
                a = indices[i]
                b = indices[j]
                if a == b:
                    c += 1
                    i += 1
                    j += 1
                elif a < b:
                    i += 1
                else:
                    j += 1
            out[p] = c
    # mirror (u, v) onto (v, u)
    for u in range(n):
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if v < u:
                lo = indptr[v]
                hi = indptr[v + 1]
                while lo < hi:
                    mid = (lo + hi) // 2
                    if indices[mid] < u:
                        lo = mid + 1
                    else:
                        hi = mid
                out[p] = out[lo]
    return out


def edge_support_np(indptr, indices):
    adj = _adjacency(indptr, indices)
    common = (adj @ adj).multiply(adj).tocsr()
    common.sort_indices()
    # the product keeps only entries present in adj, but may drop zeros
    out = np.zeros(len(indices), dtype=np.int64)
    rows = np.repeat(np.arange(adj.shape[0]), np.diff(indptr))
    vals = np.asarray(common[rows, indices]).ravel()
    out[:] = vals
    return out


# ---------------------------------------------------------------------------
# 4-cycles and 4-cliques (non-induced copies)
# ---------------------------------------------------------------------------


@njit
def cycle4_count_nb(indptr, indices):
    n = len(indptr) - 1
    cnt = np.zeros(n, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    total = 0
    for u in range(n):
        nt = 0
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            for q in range(indptr[v], indptr[v + 1]):
                w = indices[q]
                if w <= u:
                    continue
                if cnt[w] == 0:
                    touched[nt] = w
                    nt += 1
                cnt[w] += 1
        for t in range(nt):
            c = cnt[touched[t]]
            total += c * (c - 1) // 2
            cnt[touched[t]] = 0
    # each 4-cycle is seen once per diagonal
    return total // 2


def cycle4_count_np(indptr, indices):
    adj = _adjacency(indptr, indices)
    co = sp.triu(adj @ adj, k=1).tocoo()
    c = co.data.astype(np.int64)
    return int((c * (c - 1) // 2).sum() // 2)


@njit
def clique4_count_nb(indptr, indices):
    n = len(indptr) - 1
    mark = np.zeros(n, dtype=np.int64)
    total = 0
    for u in range(n):
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if v <= u:
                continue
            # mark N(u) ∩ N(v) above v with 1
            for q in range(indptr[u], indptr[u + 1]):
                mark[indices[q]] = 1
            for q in range(indptr[v], indptr[v + 1]):
                w = indices[q]
                if w > v and mark[w] == 1:
                    mark[w] = 2
            for q in range(indptr[v], indptr[v + 1]):
                w = indices[q]
                if w <= v or mark[w] != 2:
                    continue
                for r in range(indptr[w], indptr[w + 1]):
                    x = indices[r]
                    if x > w and mark[x] == 2:
                        total += 1
            for q in range(indptr[u], indptr[u + 1]):
                mark[indices[q]] = 0
    return total


def clique4_count_np(indptr, indices):
    n = len(indptr) - 1
    higher = [
        set(indices[indptr[u]:indptr[u + 1]][indices[indptr[u]:indptr[u + 1]] > u].tolist())
        for u in range(n)
    ]
    total = 0
    for u in range(n):
        for v in higher[u]:
            common = higher[u] & higher[v]
            for w in common:
                total += len(common & higher[w])
    return total


if NUMBA_ENABLED:
    bfs_distances = bfs_distances_nb
    shell_sizes = shell_sizes_nb
    edge_support = edge_support_nb
    cycle4_count = cycle4_count_nb
    clique4_count = clique4_count_nb
else:
    bfs_distances = bfs_distances_np
    shell_sizes = shell_sizes_np
    edge_support = edge_support_np
    cycle4_count = cycle4_count_np
    clique4_count = clique4_count_np
