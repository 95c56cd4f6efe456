import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal.census import c4_census
from extremal.graph import GraphError, complete_bipartite, complete_graph, disjoint_union, from_edge_list
from extremal.regularize import (
    almost_regular_subgraph,
    biregular_extract,
    bounded_degree_subgraph,
    clean_c4s,
    regularity_constant,
)

from helpers import c4_plus_c4_free, greedy_c4_free, random_graph


def test_regularity_constant():
    assert regularity_constant(0.5) == 10 * 2**5
    assert regularity_constant(1 / 3 + 0.1) > regularity_constant(0.5)


def test_almost_regular_keeps_regular_graph():
    g = complete_graph(8)
    res = almost_regular_subgraph(g, 0.4)
    assert res.subgraph == g and res.vertex_map == tuple(range(8))
    assert res.flags["almost_regular"]


def test_almost_regular_drops_isolated():
    g = disjoint_union(complete_graph(5), from_edge_list(3, []))
    res = almost_regular_subgraph(g, 0.4)
    assert res.m == 5


def test_almost_regular_rejects_bad_input():
    with pytest.raises(GraphError):
        almost_regular_subgraph(from_edge_list(4, []), 0.4)
    with pytest.raises(ValueError):
        almost_regular_subgraph(complete_graph(3), 1.5)


@settings(max_examples=25)
@given(n=st.integers(2, 40), p=st.floats(0.05, 1), seed=st.integers(0, 10**6))
def test_almost_regular_flag_is_honest(n, p, seed):
    g = random_graph(n, p, seed)
    if g.edge_count == 0:
        return
    res = almost_regular_subgraph(g, 0.4)
    sub = res.subgraph
    assert res.flags["almost_regular"] == (sub.max_degree <= res.K * sub.min_degree)
    for i, j in sub.edges:
        assert g.has_edge(res.vertex_map[i], res.vertex_map[j])


def test_bounded_degree_deterministic_per_seed():
    g = random_graph(60, 0.5, 2)
    a = bounded_degree_subgraph(g, 0.4, seed=9)
    b = bounded_degree_subgraph(g, 0.4, seed=9)
    assert a.subgraph == b.subgraph and a.attempts == b.attempts
    assert a.keep_probability < 1


def test_bounded_degree_subgraph_of_input():
    g = random_graph(50, 0.6, 4)
    res = bounded_degree_subgraph(g, 0.4, seed=1)
    for i, j in res.subgraph.edges:
        assert g.has_edge(res.vertex_map[i], res.vertex_map[j])
    assert res.success == (res.flags["edge_lower"] and res.flags["degree_upper"])


def test_bounded_degree_sparse_input_single_attempt():
    # 0.4 * 12^1.4 / 6 > 1, so the graph itself is the sample
    g = from_edge_list(12, [(2 * i, 2 * i + 1) for i in range(6)])
    res = bounded_degree_subgraph(g, 0.4, seed=0)
    assert res.keep_probability == 1.0 and res.attempts == 1
    assert res.subgraph.edge_count == 6


def test_biregular_on_complete_bipartite():
    ex = biregular_extract(complete_bipartite(3, 3))
    assert {frozenset(ex.X1), frozenset(ex.X2)} == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}
    assert ex.D1 == ex.D2 == 3


def test_biregular_output_is_bipartite_between_sides():
    g = random_graph(30, 0.3, 8)
    ex = biregular_extract(g)
    x1, x2 = set(ex.X1), set(ex.X2)
    assert x1 and x2 and not x1 & x2
    for u, v in ex.subgraph.edges:
        assert (u in x1 and v in x2) or (u in x2 and v in x1)
        assert g.has_edge(u, v)


def test_clean_leaves_c4_free_graph():
    g = greedy_c4_free(30, 40, seed=3)
    res = clean_c4s(g)
    assert res.graph == g and not res.removed


def test_clean_constructed_instance():
    g = c4_plus_c4_free()
    res = clean_c4s(g)
    assert [r["edge"] for r in res.removed] == [[0, 1]]
    assert res.q_final == 0 and res.graph.edge_count == 59


def test_clean_complete_graph_unchanged():
    # every edge of K_8 lies in the same share of 4-cycles, below the threshold
    res = clean_c4s(complete_graph(8))
    assert not res.removed and res.q_final == 210


@settings(max_examples=30)
@given(n=st.integers(4, 40), p=st.floats(0.05, 0.7), seed=st.integers(0, 10**6))
def test_clean_postconditions(n, p, seed):
    g = random_graph(n, p, seed)
    res = clean_c4s(g)
    out = res.graph
    cen = c4_census(out)
    assert cen.total == res.q_final
    if g.edge_count > 3:
        assert cen.max_per_edge <= 16 * math.log(n) / g.edge_count * cen.total or cen.total == 0
    assert set(out.edges) <= set(g.edges)
    assert len(res.removed) == g.edge_count - out.edge_count
