import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal.census import (
    BudgetExceeded,
    PreconditionError,
    SupersatParams,
    c4_census,
    check_min_degree_hom_bound,
    check_sidorenko,
    codegree_edge_relation,
    conflict_free_cycle_search,
    count_conflicting_edge_cycles,
    count_conflicting_vertex_cycles,
    edge_fanout,
    equality_relation,
    genuine_cycle_count,
    hom_cycle_count,
    labelled_cycles,
    log,
    never_relation,
    share_one_vertex_relation,
    supersaturation_report,
)
from extremal.graph import GraphError, complete_bipartite, complete_graph, cycle_graph, from_edge_list
from extremal.hkl import build_hkl
from extremal.oracles import hom_count_bruteforce, hom_count_enumerate

from helpers import random_bipartite_min_degree, random_graph


def _from_nx(h):
    h = nx.convert_node_labels_to_integers(h)
    return from_edge_list(h.number_of_nodes(), list(h.edges))


def test_hom_complete_graph_formula():
    for n in range(2, 7):
        for k in range(1, 4):
            assert hom_cycle_count(complete_graph(n), k) == (n - 1) ** (2 * k) + (n - 1)


def test_hom_petersen():
    # spectrum 3, 1^5, (-2)^4
    g = _from_nx(nx.petersen_graph())
    assert hom_cycle_count(g, 2) == 81 + 5 + 64
    assert hom_cycle_count(g, 3) == 729 + 5 + 4 * 64


def test_hom_large_values_exact():
    g = complete_graph(40)
    assert hom_cycle_count(g, 6) == 39**12 + 39


@settings(max_examples=40)
@given(n=st.integers(1, 7), p=st.floats(0, 1), seed=st.integers(0, 10**6), k=st.integers(1, 3))
def test_hom_matches_oracles(n, p, seed, k):
    g = random_graph(n, p, seed)
    assert hom_cycle_count(g, k) == hom_count_bruteforce(g, k)
    if n ** (2 * k) <= 10**5:
        assert hom_cycle_count(g, k) == hom_count_enumerate(g, k)


def test_c4_census_values():
    assert c4_census(complete_graph(4)).total == 3
    assert c4_census(complete_graph(8)).total == 210
    assert c4_census(complete_bipartite(3, 3)).total == 9
    assert c4_census(complete_bipartite(3, 3)).max_per_edge == 4
    cube = _from_nx(nx.hypercube_graph(3))
    cen = c4_census(cube)
    assert cen.total == 6 and set(cen.per_edge.values()) == {2}
    assert c4_census(cycle_graph(5)).total == 0


@settings(max_examples=30)
@given(n=st.integers(4, 9), p=st.floats(0.2, 0.9), seed=st.integers(0, 10**6))
def test_c4_census_matches_enumeration(n, p, seed):
    g = random_graph(n, p, seed)
    cycles = labelled_cycles(g, 4)
    cen = c4_census(g)
    assert cen.total == len(cycles) // 8
    for (u, v), c in cen.per_edge.items():
        assert c == sum(1 for t in cycles if t[0] == u and t[1] == v)
    assert 4 * cen.total == sum(cen.per_edge.values())


def test_sidorenko_regular_is_tight():
    rep = check_sidorenko(build_hkl(1, 2).graph, 2)
    assert rep.satisfied and rep.direction == "lower"
    assert rep.measured >= rep.bound


@settings(max_examples=40)
@given(n=st.integers(1, 20), p=st.floats(0, 1), seed=st.integers(0, 10**6), k=st.integers(2, 3))
def test_sidorenko_property(n, p, seed, k):
    assert check_sidorenko(random_graph(n, p, seed), k).satisfied


def test_sidorenko_empty_host():
    with pytest.raises(GraphError):
        check_sidorenko(from_edge_list(0, []), 2)


def test_min_degree_bound():
    g, parts = random_bipartite_min_degree(6, 8, 3, 2, seed=1)
    rep = check_min_degree_hom_bound(g, parts, 2)
    assert rep.satisfied and rep.parameters["s"] >= 3 and rep.parameters["t"] >= 2


def test_min_degree_bound_rejects_bad_parts():
    g = complete_bipartite(2, 2)
    with pytest.raises(GraphError):
        check_min_degree_hom_bound(g, ({0, 2}, {1, 3}), 2)
    with pytest.raises(GraphError):
        check_min_degree_hom_bound(g, ({0}, {2, 3}), 2)


def _edge_conflicts(g, k, rel):
    L = 2 * k
    bad = 0
    for t in itertools.product(range(g.n), repeat=L):
        if not all(g.has_edge(t[i], t[(i + 1) % L]) for i in range(L)):
            continue
        es = [tuple(sorted((t[i], t[(i + 1) % L]))) for i in range(L)]
        if any(rel.predicate(es[i], es[j]) for i in range(L) for j in range(L) if i != j):
            bad += 1
    return bad


def test_edge_conflicts_match_scan():
    g = random_graph(7, 0.5, 11)
    rel = codegree_edge_relation(g, 1)
    s = edge_fanout(g, rel)
    rep = count_conflicting_edge_cycles(g, 2, rel, s)
    assert rep.measured == _edge_conflicts(g, 2, rel)
    assert rep.satisfied


def test_edge_fanout_precondition():
    g = complete_graph(5)
    rel = share_one_vertex_relation()
    with pytest.raises(PreconditionError):
        count_conflicting_edge_cycles(g, 2, rel, edge_fanout(g, rel) - 1)


def test_vertex_conflicts_equality_relation():
    g = complete_bipartite(3, 3)
    x1, x2 = range(3), range(3, 6)
    rep = count_conflicting_vertex_cycles(g, 2, x1, x2, equality_relation(), 3, 3, 1, 1)
    # closed 4-walks in K_{3,3} that are not genuine 4-cycles
    assert rep.measured == hom_cycle_count(g, 2) - len(labelled_cycles(g, 4))
    assert rep.satisfied


def test_vertex_precondition():
    g = complete_bipartite(3, 3)
    with pytest.raises(PreconditionError):
        count_conflicting_vertex_cycles(g, 2, range(3), range(3, 6), equality_relation(), 2, 3, 1, 1)


def test_conflict_free_search():
    g = complete_bipartite(3, 3)
    res = conflict_free_cycle_search(g, 2, equality_relation())
    assert res.status == "found" and len(set(res.walk)) == 4
    res = conflict_free_cycle_search(cycle_graph(6), 2, equality_relation())
    assert res.status == "absent"
    res = conflict_free_cycle_search(g, 2, never_relation())
    assert res.status == "found"


def test_genuine_cycles():
    assert genuine_cycle_count(complete_graph(5), 5) == 12
    assert genuine_cycle_count(build_hkl(1, 2).graph, 4) == c4_census(build_hkl(1, 2).graph).total
    with pytest.raises(BudgetExceeded):
        labelled_cycles(complete_graph(8), 8, budget=10)


def test_supersaturation_records_only():
    rep = supersaturation_report(complete_graph(6), 2, SupersatParams(1.0, 0.01))
    assert rep.measured == 45 and rep.direction == "lower"


def test_log_bases():
    assert log(8, "two") == pytest.approx(3)
    assert log(8) == pytest.approx(2.0794415)
    with pytest.raises(ValueError):
        log(2, "ten")
