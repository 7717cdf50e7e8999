import numpy as np
import pytest

from mirrorbench.graph import Graph, from_edge_list
from mirrorbench.synth import make_clique_ring, make_power_law, make_random_tree


def complete(n):
    return from_edge_list([(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n):
    return from_edge_list([(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return from_edge_list([(i, (i + 1) % n) for i in range(n)])


def star(leaves):
    return from_edge_list([(0, i) for i in range(1, leaves + 1)])


def two_k2():
    return Graph.from_arrays(4, [0, 2], [1, 3])


def random_graph(rng, n, p):
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_arrays(n, iu[keep], ju[keep])


def random_perm(rng, n):
    return rng.permutation(n)


@pytest.fixture(scope="session")
def clique_ring():
    return make_clique_ring(500, 4)


@pytest.fixture(scope="session")
def small_ring():
    return make_clique_ring(125, 4)


@pytest.fixture(scope="session")
def tree():
    return make_random_tree(3000, 0)


@pytest.fixture(scope="session")
def power_law_512():
    return make_power_law(512, 3, 0)


def small_corpus(seed=0):
    """Ten varied graphs used by the metric axiom checks."""
    rng = np.random.default_rng(seed)
    return [
        complete(5),
        path(7),
        cycle(9),
        star(6),
        make_clique_ring(6, 4),
        make_random_tree(40, 3),
        make_power_law(60, 2, 1),
        random_graph(rng, 30, 0.15),
        random_graph(rng, 45, 0.08),
        Graph.from_arrays(12, [0, 1, 2, 4, 5, 7, 8, 9], [1, 2, 0, 5, 6, 8, 9, 10]),
    ]
