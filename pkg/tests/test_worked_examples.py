"""Small hand-checkable instances with frozen values."""

from fractions import Fraction

import numpy as np
import pytest

from extremal.builder import BuilderParams, build_good_few, extend_to_long_cycles, find_c4_anchor, NoAnchorError
from extremal.census import (
    SupersatParams,
    c4_census,
    check_min_degree_hom_bound,
    check_sidorenko,
    codegree_edge_relation,
    conflict_free_cycle_search,
    count_conflicting_edge_cycles,
    count_conflicting_vertex_cycles,
    equality_relation,
    hom_cycle_count,
    never_relation,
    share_one_vertex_relation,
    supersaturation_report,
)
from extremal.embedder import PipelineParams, aux_adjacent, conflict, find_pattern_embedding, run_pipeline, weave
from extremal.goodnice import CycleCollection, check_good, check_nice, infer_s
from extremal.graph import (
    bipartition,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_edge_list,
    star_graph,
)
from extremal.hkl import build_hkl, rooted_power_density
from extremal.oracles import embed_bruteforce
from extremal.regularize import almost_regular_subgraph, biregular_extract, bounded_degree_subgraph

TREE = from_edge_list(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])


def test_hkl_2_4_grid():
    h = build_hkl(2, 4)
    assert h.graph.n == 64 and (h.rows, h.columns) == (8, 8)


def test_double_star_density():
    t = from_edge_list(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
    st = rooted_power_density(t, 3)
    assert st.rho == st.bound == Fraction(2, 5)


def test_bipartition_small():
    x, y = bipartition(cycle_graph(4))
    assert {x, y} == {frozenset({0, 2}), frozenset({1, 3})}
    assert bipartition(complete_graph(3)) is None


@pytest.mark.parametrize(
    "g,k,measured,bound",
    [(cycle_graph(5), 2, 30, 16), (complete_graph(4), 2, 84, 81), (from_edge_list(0, []), 2, 0, 0)],
)
def test_sidorenko_values(g, k, measured, bound):
    if g.n == 0:
        assert hom_cycle_count(g, k) == 0
        return
    rep = check_sidorenko(g, k)
    assert rep.measured == measured and rep.bound == pytest.approx(bound) and rep.satisfied


def test_min_degree_values():
    g = complete_bipartite(2, 3)
    rep = check_min_degree_hom_bound(g, bipartition(g), 2)
    assert (rep.measured, rep.bound) == (72, 36)
    edge = from_edge_list(2, [(0, 1)])
    rep = check_min_degree_hom_bound(edge, ({0}, {1}), 1)
    assert (rep.measured, rep.bound) == (2, 1)
    c6 = cycle_graph(6)
    rep = check_min_degree_hom_bound(c6, bipartition(c6), 3)
    assert rep.bound == 64 and rep.measured == 132


def test_c4_per_edge_small():
    cen = c4_census(complete_graph(4))
    assert cen.total == 3 and set(cen.per_edge.values()) == {2}
    cen = c4_census(cycle_graph(4))
    assert cen.total == 1 and set(cen.per_edge.values()) == {1}
    assert c4_census(TREE).total == 0


def test_edge_conflict_instances():
    assert count_conflicting_edge_cycles(complete_graph(4), 2, never_relation("edge"), 1).measured == 0
    assert count_conflicting_edge_cycles(complete_graph(4), 2, share_one_vertex_relation(), 4).satisfied
    k5 = complete_graph(5)
    assert count_conflicting_edge_cycles(k5, 2, codegree_edge_relation(k5, 1), 2 * 5 ** (1 / 3)).satisfied


def test_vertex_conflict_instances():
    v4 = range(4)
    assert count_conflicting_vertex_cycles(complete_graph(4), 2, v4, v4, equality_relation(), 3, 3, 1, 1).satisfied
    assert count_conflicting_vertex_cycles(complete_graph(4), 2, v4, v4, never_relation(), 3, 3, 1, 1).measured == 0
    v6 = range(6)
    assert count_conflicting_vertex_cycles(cycle_graph(6), 3, v6, v6, equality_relation(), 2, 2, 1, 1).satisfied


def test_conflict_free_search_instances():
    res = conflict_free_cycle_search(cycle_graph(4), 2, never_relation())
    assert res.walk == (0, 1, 2, 3)
    assert conflict_free_cycle_search(complete_graph(3), 2, equality_relation()).status == "absent"
    walk = conflict_free_cycle_search(cycle_graph(8), 4, equality_relation()).walk
    assert sorted(walk) == list(range(8))


def test_supersaturation_instances():
    assert supersaturation_report(complete_graph(5), 2, SupersatParams(1, 1)).measured == 15
    rep = supersaturation_report(cycle_graph(6), 3, SupersatParams(1, 1))
    assert rep.measured == 1 and rep.extra["hypothesis_edges"] is False


def test_regularize_instances():
    res = almost_regular_subgraph(complete_graph(6), 0.4)
    assert res.subgraph == complete_graph(6) and all(res.flags.values())
    res = almost_regular_subgraph(star_graph(9), 0.5)
    assert res.subgraph.max_degree <= res.K * res.subgraph.min_degree
    res = bounded_degree_subgraph(complete_graph(8), 0.3, seed=1)
    assert res.flags["edge_lower"] == (res.subgraph.edge_count >= 8**1.3 / 3)


def test_biregular_instances():
    ex = biregular_extract(complete_graph(4))
    assert ex.subgraph.edge_count > 0
    assert min(ex.subgraph.degrees[v] for v in ex.X1 | ex.X2) >= 1
    ex = biregular_extract(from_edge_list(2, [(0, 1)]))
    assert {frozenset(ex.X1), frozenset(ex.X2)} == {frozenset({0}), frozenset({1})}
    assert ex.D1 == ex.D2 == 1


def test_goodness_instances():
    one = CycleCollection(1, (tuple(range(8)),))
    assert infer_s(one) == 1
    assert check_good(one, 16, 1).verdict
    two = CycleCollection(1, (tuple(range(8)), (0, 1, 2, 9, 4, 5, 6, 7)))
    assert infer_s(two) == 2
    assert not check_good(two, 1e-9, 2).verdict
    assert not check_nice(one, 0.5).verdict


def test_builder_instances():
    assert len(small_c8 := build_good_few(cycle_graph(8), BuilderParams(0.1, 1, tau=1)).collection) == 16
    assert small_c8.tuples[0] == (0, 1, 2, 3, 4, 5, 6, 7)
    res = build_good_few(TREE, BuilderParams(0.1, 1, tau=1))
    assert not res.ok and res.hypotheses
    h = build_hkl(1, 2).graph
    tau = int(h.codegree_matrix[~np.eye(h.n, dtype=bool)].max())
    assert len(build_good_few(h, BuilderParams(0.1, 1, tau=tau)).collection) > 0
    with pytest.raises(NoAnchorError):
        find_c4_anchor(TREE)


def test_empty_extension_family():
    # a single C4 supports no 8-cycle, so F carries no 4-cycle
    coll, info = extend_to_long_cycles(find_c4_anchor(cycle_graph(4)), 1)
    assert len(coll) == 0 and info.f_cycles == 0


def test_aux_instances():
    a, b = (0, 1, 2, 3), (4, 5, 6, 7)
    C = CycleCollection(1, (weave(a, b, 1),))
    assert aux_adjacent(a, b, C) and aux_adjacent(b, a, C)
    assert not aux_adjacent(a, b, CycleCollection(1, ()))
    assert not conflict(a, b) and conflict(a, (9, 9, 9, 0)) and conflict(a, a)
    assert find_pattern_embedding(cycle_graph(8), CycleCollection(1, ()), 1, 2).status == "absent"


def test_pipeline_on_tree():
    rep = run_pipeline(TREE, PipelineParams(0.15, 1, 2))
    assert rep.failure["stage"] == "build"
    assert next(s for s in rep.stages if s.name == "branch").details["q"] == 0


def test_embed_instances():
    assert embed_bruteforce(cycle_graph(4), complete_graph(4)).found
    assert embed_bruteforce(star_graph(4), build_hkl(1, 2).graph).status == "absent"
    res = embed_bruteforce(build_hkl(1, 2).graph, build_hkl(1, 2).graph)
    assert res.found
