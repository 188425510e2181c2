import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from makerbreaker.graph import (Graph, bfs_distances, components, contains_induced_k_path, er_graph,
                                flower_snark, grid_graph, is_dominating)

from brute import dominates, has_induced_k_path
from conftest import graph_and_subset, graphs


def check_invariants(g: Graph):
    for v, nbrs in enumerate(g.adjacency):
        assert list(nbrs) == sorted(set(nbrs))
        assert v not in nbrs
        for w in nbrs:
            assert v in g.adjacency[w]


def test_grid_examples():
    g = grid_graph(1, 1)
    assert (g.n, g.m) == (1, 0)
    g = grid_graph(5, 3)
    assert (g.n, g.m) == (15, 22)
    assert all(grid_graph(2, 2).degree(v) == 2 for v in range(4))


def test_grid_ids_are_row_major():
    g = grid_graph(3, 4)
    assert g.neighbors(5) == (1, 4, 6, 9)


@pytest.mark.parametrize("bad", [(0, 3), (3, 0)])
def test_grid_rejects_zero(bad):
    with pytest.raises(ValueError):
        grid_graph(*bad)


def test_grid_edge_formula():
    for r in range(1, 13):
        for c in range(1, 13):
            g = grid_graph(r, c)
            assert g.m == r * (c - 1) + c * (r - 1)
            check_invariants(g)


def test_er_extremes_and_determinism():
    assert er_graph(12, 0.0, 5).m == 0
    assert er_graph(12, 1.0, 5).m == 66
    assert er_graph(12, 0.3, 7) == er_graph(12, 0.3, 7)
    assert er_graph(12, 0.3, 7).to_edge_list() == er_graph(12, 0.3, 7).to_edge_list()
    check_invariants(er_graph(20, 0.4, 1))


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_er_rejects_bad_p(p):
    with pytest.raises(ValueError):
        er_graph(5, p, 0)


@pytest.mark.parametrize("t", [5, 7, 9])
def test_flower_snark_cubic(t):
    g = flower_snark(t)
    assert (g.n, g.m) == (4 * t, 6 * t)
    assert set(g.degrees) == {3}
    check_invariants(g)


@pytest.mark.parametrize("t", [4, 3, 1, 6])
def test_flower_snark_rejects(t):
    with pytest.raises(ValueError):
        flower_snark(t)


def _girth(g: Graph) -> int:
    best = math.inf
    for s in range(g.n):
        dist, parent, queue = {s: 0}, {s: -1}, [s]
        for u in queue:
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w], parent[w] = dist[u] + 1, u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def _three_edge_colourable(g: Graph) -> bool:
    edges = g.edges()
    at = {v: [] for v in range(g.n)}
    for i, (u, v) in enumerate(edges):
        at[u].append(i)
        at[v].append(i)
    colour = {}

    def place(i):
        if i == len(edges):
            return True
        u, v = edges[i]
        for c in range(3):
            if all(colour.get(j) != c for j in at[u] + at[v]):
                colour[i] = c
                if place(i + 1):
                    return True
                del colour[i]
        return False

    return place(0)


@pytest.mark.parametrize("t,girth", [(5, 5), (7, 6)])
def test_flower_snark_matches_fixture_and_is_a_snark(t, girth, fixtures_dir):
    g = flower_snark(t)
    assert g == Graph.from_edge_list((fixtures_dir / f"flower_snark_j{t}.txt").read_text())
    assert _girth(g) == girth
    assert not _three_edge_colourable(g)


def test_flower_snark_seven_has_28_vertices():
    assert flower_snark(7).n == 28


def test_bfs_examples():
    assert bfs_distances(grid_graph(1, 3), 0) == [0, 1, 2]
    assert bfs_distances(grid_graph(2, 2), 3)[3] == 0
    assert bfs_distances(Graph.from_edges(3, []), 0) == [0, math.inf, math.inf]


def test_components_examples():
    assert components(grid_graph(1, 3), set()) == []
    assert components(grid_graph(3, 3), range(9)) == [frozenset(range(9))]
    assert sorted(map(sorted, components(grid_graph(1, 3), {0, 2}))) == [[0], [2]]


@given(graph_and_subset())
def test_components_partition_restriction(gs):
    g, s = gs
    comps = components(g, s)
    assert sum(len(c) for c in comps) == len(s)
    assert set().union(*comps) == s if comps else not s


def test_is_dominating_examples():
    assert is_dominating(grid_graph(3, 3), range(9))
    assert not is_dominating(grid_graph(2, 2), {0})
    assert is_dominating(grid_graph(1, 3), {1})


def test_induced_path_examples():
    assert not contains_induced_k_path(grid_graph(1, 3), set(), 3)
    assert contains_induced_k_path(grid_graph(1, 3), {0, 1, 2}, 3)
    assert not contains_induced_k_path(grid_graph(2, 2), {0, 1, 2, 3}, 4)
    # three cells of a 2x2 block do form an induced path
    assert contains_induced_k_path(grid_graph(2, 2), {0, 1, 3}, 3)


@given(graph_and_subset(max_n=9), st.integers(1, 5))
def test_induced_path_matches_enumeration(gs, k):
    g, s = gs
    assert contains_induced_k_path(g, s, k) == has_induced_k_path(g, s, k)


@given(graph_and_subset(max_n=9), st.integers(1, 5), st.integers(0, 8))
def test_induced_path_monotone(gs, k, extra):
    g, s = gs
    if contains_induced_k_path(g, s, k):
        assert contains_induced_k_path(g, s | {extra % g.n}, k)


@given(graph_and_subset(max_n=10))
def test_dominating_matches_definition_and_is_monotone(gs):
    g, s = gs
    assert is_dominating(g, s) == dominates(g, s)
    if is_dominating(g, s):
        assert all(is_dominating(g, s | {v}) for v in range(g.n))


@given(graphs(max_n=12))
def test_edge_list_round_trip(g):
    assert Graph.from_edge_list(g.to_edge_list()) == g


def test_edge_list_format():
    assert grid_graph(1, 3).to_edge_list() == "3 2\n0 1\n1 2\n"


def test_graph_rejects_self_loops_and_asymmetry():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, ((1,), ()))
