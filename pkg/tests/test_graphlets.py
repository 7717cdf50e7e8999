from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from mirrorbench.graphlets import GRAPHLET_NAMES, graphlet_counts, graphlet_counts_bruteforce

from conftest import complete, cycle, path, random_graph, star

# networkx atlas graphs for the nine shapes, in GRAPHLET_NAMES order
_SHAPES = [
    nx.path_graph(2),
    nx.path_graph(3),
    nx.complete_graph(3),
    nx.path_graph(4),
    nx.star_graph(3),
    nx.cycle_graph(4),
    nx.Graph([(0, 1), (1, 2), (2, 0), (2, 3)]),
    nx.Graph([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
    nx.complete_graph(4),
]


def _isomorphism_oracle(g):
    """Counts by testing every 2/3/4-subset for isomorphism with each shape."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(map(tuple, g.edges()))
    out = np.zeros(9, dtype=np.int64)
    for size in (2, 3, 4):
        for nodes in combinations(range(g.n), size):
            sub = h.subgraph(nodes)
            for idx, shape in enumerate(_SHAPES):
                if shape.number_of_nodes() == size and nx.is_isomorphic(sub, shape):
                    out[idx] += 1
    return out


def test_named_examples():
    assert graphlet_counts(complete(4)).tolist() == [6, 0, 4, 0, 0, 0, 0, 0, 1]
    assert graphlet_counts(cycle(4)).tolist() == [4, 4, 0, 0, 0, 1, 0, 0, 0]
    assert graphlet_counts(path(3)).tolist() == [2, 1, 0, 0, 0, 0, 0, 0, 0]
    assert graphlet_counts(star(3)).tolist() == [3, 3, 0, 0, 1, 0, 0, 0, 0]
    assert len(GRAPHLET_NAMES) == 9


@pytest.mark.parametrize("seed", range(8))
def test_bruteforce_helper_matches_isomorphism_oracle(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(4, 9)), float(rng.random()))
    assert graphlet_counts_bruteforce(g).tolist() == _isomorphism_oracle(g).tolist()


def test_matches_bruteforce_on_random_graphs():
    rng = np.random.default_rng(2024)
    for _ in range(120):
        g = random_graph(rng, int(rng.integers(0, 13)), float(rng.random()))
        assert np.array_equal(graphlet_counts(g), graphlet_counts_bruteforce(g))


def test_clique_ring_counts(clique_ring):
    c = graphlet_counts(clique_ring)
    assert c[0] == clique_ring.m
    assert c[2] == 2000 and c[8] == 500
