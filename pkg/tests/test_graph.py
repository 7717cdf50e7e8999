import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mirrorbench import graph as G
from mirrorbench.errors import SpectrumTooLarge
from mirrorbench.graph import Graph, from_edge_list

from conftest import complete, cycle, path, random_graph, star, two_k2


def test_from_edge_list_drops_loops_and_duplicates():
    g = from_edge_list([(0, 1), (1, 0), (2, 2)])
    assert (g.n, g.m) == (3, 1)


def test_from_edge_list_compacts_by_first_appearance():
    g = from_edge_list([(10, 5), (5, 7)])
    assert g.n == 3
    assert g.edges().tolist() == [[0, 1], [1, 2]]


def test_from_edge_list_empty():
    g = from_edge_list([])
    assert (g.n, g.m) == (0, 0)


def test_k4_counts():
    g = complete(4)
    assert (g.n, g.m) == (4, 6)
    assert G.degree_histogram(g) == {3: 4}
    assert G.count_triangles(g) == 4
    assert G.average_clustering(g) == 1.0
    assert G.average_path_length(g) == 1.0
    assert G.density(g) == 1.0


def test_small_graph_primitives():
    p3 = path(3)
    assert G.degree_histogram(p3) == {1: 2, 2: 1}
    assert G.average_path_length(p3) == pytest.approx(4 / 3)
    assert G.density(cycle(4)) == pytest.approx(2 / 3)
    assert G.density(Graph.empty(1)) == 0.0
    assert G.average_clustering(Graph.empty(0)) == 0.0


def test_bfs_distances():
    assert G.bfs_distances(path(3), 0).tolist() == [0, 1, 2]
    assert G.bfs_distances(complete(4), 2).tolist() == [1, 1, 0, 1]
    d = G.bfs_distances(two_k2(), 0)
    assert d.tolist() == [0, 1, -1, -1]


def test_connected_components():
    assert G.connected_components(complete(4)).tolist() == [0, 0, 0, 0]
    assert G.connected_components(two_k2()).tolist() == [0, 0, 1, 1]
    assert len(G.connected_components(Graph.empty(0))) == 0


def test_path_stats_no_pairs():
    s = G.path_length_stats(Graph.empty(5))
    assert s.average == 0.0 and not s.defined


def test_pagerank_symmetric_graphs():
    assert np.allclose(G.pagerank(cycle(5)).scores, 0.2)
    assert np.allclose(G.pagerank(complete(2)).scores, [0.5, 0.5])


def test_pagerank_star_matches_linear_solve():
    # hub h and leaves l satisfy h = (1-d)/4 + d*3l and l = (1-d)/4 + d*h/3
    d = 0.85
    a = np.array([[1.0, -3 * d], [-d / 3, 1.0]])
    h, leaf = np.linalg.solve(a, [(1 - d) / 4, (1 - d) / 4])
    # bipartite: the iterate error decays like 0.85^k, so allow 1e-6
    pr = G.pagerank(star(3))
    assert pr.scores[0] == pytest.approx(h, abs=1e-6)
    assert np.allclose(pr.scores[1:], leaf, atol=1e-6)
    assert G.pagerank(star(3), max_iter=500).converged
    assert pr.scores[0] > pr.scores[1]


def test_pagerank_isolates_and_flag():
    g = Graph.from_arrays(4, [0], [1])
    pr = G.pagerank(g)
    assert pr.scores.sum() == pytest.approx(1.0, abs=1e-8)
    assert pr.scores[2] == pytest.approx(pr.scores[3])
    assert not G.pagerank(path(50), max_iter=2).converged


def test_laplacian_spectra_small():
    assert np.allclose(G.laplacian_spectrum(complete(4)).eigenvalues, [4, 4, 4, 0], atol=1e-9)
    assert np.allclose(G.laplacian_spectrum(complete(2)).eigenvalues, [2, 0], atol=1e-12)
    assert np.allclose(G.laplacian_spectrum(complete(2), G.NORMALIZED).eigenvalues, [2, 0],
                       atol=1e-12)


def test_spectrum_residual_spot_check():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 40, 0.2)
    lap = G.laplacian(g).toarray()
    vals, vecs = np.linalg.eigh(lap)
    ours = G.laplacian_spectrum(g).eigenvalues
    assert np.allclose(ours, vals[::-1])
    for k in (0, 17, 39):
        lam = ours[k]
        v = vecs[:, np.argmin(np.abs(vals - lam))]
        assert np.linalg.norm(lap @ v - lam * v) <= 1e-6 * np.linalg.norm(lap, 2)


def test_dense_limit_and_truncated_mode():
    g = cycle(60)
    with pytest.raises(SpectrumTooLarge):
        G.laplacian_spectrum(g, dense_limit=50)
    top = G.laplacian_spectrum(g, dense_limit=50, top=5)
    full = G.laplacian_spectrum(g).eigenvalues
    assert top.truncated
    assert np.allclose(top.eigenvalues, full[:5], atol=1e-7)


def test_normalized_spectrum_range():
    rng = np.random.default_rng(4)
    g = random_graph(rng, 50, 0.1)
    vals = G.laplacian_spectrum(g, G.NORMALIZED).eigenvalues
    assert vals.min() >= -1e-9 and vals.max() <= 2 + 1e-9


def test_edge_list_round_trip(tmp_path):
    g = Graph.from_arrays(7, [0, 3, 1], [3, 5, 0])  # node 2, 4, 6 isolated
    f = tmp_path / "g.txt"
    G.write_edge_list(g, f)
    h = G.read_edge_list(f)
    assert h == g


def test_read_edge_list_comments_and_compaction(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("# a comment\n\n10 20\n20 30\n30 10\n10 10\n")
    g = G.read_edge_list(f)
    assert (g.n, g.m) == (3, 3)


def test_relabel_preserves_structure():
    rng = np.random.default_rng(1)
    g = random_graph(rng, 20, 0.3)
    h = g.relabel(rng.permutation(20))
    assert h.m == g.m
    assert G.count_triangles(h) == G.count_triangles(g)


# -- properties -------------------------------------------------------------

graphs = st.builds(
    lambda n, p, seed: random_graph(np.random.default_rng(seed), n, p),
    st.integers(0, 14), st.floats(0, 1), st.integers(0, 2**32 - 1),
)


@settings(max_examples=120, deadline=None)
@given(graphs)
def test_graph_invariants(g):
    adj = {(int(u), int(v)) for u in range(g.n) for v in g.neighbors(u)}
    assert all((v, u) in adj for u, v in adj)
    assert all(u != v for u, v in adj)
    assert 2 * g.m == len(g.indices)
    pr = G.pagerank(g).scores
    if g.n:
        assert pr.sum() == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=120, deadline=None)
@given(graphs)
def test_triangles_match_triples(g):
    dense = np.zeros((g.n, g.n), dtype=int)
    e = g.edges()
    dense[e[:, 0], e[:, 1]] = dense[e[:, 1], e[:, 0]] = 1
    brute = sum(
        dense[a, b] * dense[b, c] * dense[a, c]
        for a in range(g.n) for b in range(a + 1, g.n) for c in range(b + 1, g.n)
    )
    assert G.count_triangles(g) == brute


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_zero_eigenvalues_count_components(g):
    if g.n == 0:
        return
    vals = G.laplacian_spectrum(g).eigenvalues
    ncomp = len(set(G.connected_components(g).tolist()))
    assert int(np.sum(np.abs(vals) < 1e-8)) == ncomp


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 25), st.integers(0, 2**32 - 1))
def test_apl_bounds_on_connected_graphs(n, seed):
    rng = np.random.default_rng(seed)
    # random tree plus extra edges stays connected
    parents = [int(rng.integers(0, i)) for i in range(1, n)]
    g = Graph.from_arrays(n, parents, list(range(1, n)))
    apl = G.average_path_length(g)
    assert 1.0 <= apl <= n - 1


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(0, 2**32 - 1))
def test_pagerank_relabel_equivariant(g, seed):
    perm = np.random.default_rng(seed).permutation(g.n)
    a = G.pagerank(g).scores
    b = G.pagerank(g.relabel(perm)).scores
    assert np.allclose(b[perm], a, atol=1e-10)
