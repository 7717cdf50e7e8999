"""The numba and numpy kernel paths must agree exactly."""
import numpy as np
import pytest

from mirrorbench import kernels as K
from mirrorbench._accel import NUMBA_ENABLED
from mirrorbench.synth import make_clique_ring, make_power_law

from conftest import random_graph, two_k2

PAIRS = [
    (K.bfs_distances_nb, K.bfs_distances_np),
    (K.shell_sizes_nb, K.shell_sizes_np),
    (K.edge_support_nb, K.edge_support_np),
    (K.cycle4_count_nb, K.cycle4_count_np),
    (K.clique4_count_nb, K.clique4_count_np),
]


def _graphs():
    rng = np.random.default_rng(11)
    out = [two_k2(), make_clique_ring(5, 4), make_power_law(80, 3, 2)]
    out += [random_graph(rng, int(rng.integers(2, 40)), float(rng.random())) for _ in range(15)]
    return out


@pytest.mark.parametrize("g", _graphs(), ids=lambda g: repr(g))
def test_paths_agree(g):
    ip, ix = g.indptr, g.indices
    for s in range(min(g.n, 3)):
        assert np.array_equal(K.bfs_distances_nb(ip, ix, s), K.bfs_distances_np(ip, ix, s))
    src = np.arange(g.n, dtype=np.int64)
    o1, s1 = K.shell_sizes_nb(ip, ix, src)
    o2, s2 = K.shell_sizes_np(ip, ix, src)
    assert np.array_equal(o1, o2) and np.array_equal(s1, s2)
    assert np.array_equal(K.edge_support_nb(ip, ix), K.edge_support_np(ip, ix))
    assert K.cycle4_count_nb(ip, ix) == K.cycle4_count_np(ip, ix)
    assert K.clique4_count_nb(ip, ix) == K.clique4_count_np(ip, ix)


def test_dispatch_follows_flag():
    expected = K.shell_sizes_nb if NUMBA_ENABLED else K.shell_sizes_np
    assert K.shell_sizes is expected


def test_shell_sizes_sum_to_component_sizes():
    g = two_k2()
    offsets, sizes = K.shell_sizes(g.indptr, g.indices, np.arange(4, dtype=np.int64))
    assert offsets.tolist() == [0, 2, 4, 6, 8]
    assert sizes.tolist() == [1, 1] * 4
