import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremal.builder import BuilderParams, build_good_many, small_codegree_cycles
from extremal.embedder import (
    Embedding,
    PipelineParams,
    aux_adjacent,
    aux_index,
    conflict,
    embedding_from_aux_cycle,
    find_pattern_embedding,
    neighbour_hit_measure,
    run_pipeline,
    unweave,
    weave,
    weave_positions,
)
from extremal.goodnice import CycleCollection
from extremal.graph import HostSpec, complete_bipartite, from_edge_list, generate_host
from extremal.hkl import build_hkl
from extremal.oracles import embed_bruteforce


def test_weave_positions_k1():
    assert weave_positions(1) == [
        ("y", 0), ("y", 1), ("z", 2), ("z", 3), ("y", 3), ("y", 2), ("z", 1), ("z", 0),
    ]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_weave_positions_is_bijection(k):
    pos = weave_positions(k)
    assert sorted(pos) == sorted([("y", i) for i in range(4 * k)] + [("z", i) for i in range(4 * k)])


@given(st.integers(1, 3).flatmap(
    lambda k: st.tuples(st.just(k), st.lists(st.integers(), min_size=8 * k, max_size=8 * k))
))
def test_weave_round_trip(data):
    k, xs = data
    y, z = tuple(xs[: 4 * k]), tuple(xs[4 * k:])
    assert unweave(weave(y, z, k), k) == (y, z)
    assert weave(*unweave(tuple(xs), k), k) == tuple(xs)


def test_weave_length_errors():
    with pytest.raises(ValueError):
        weave((1, 2), (3, 4), 1)
    with pytest.raises(ValueError):
        unweave((1, 2, 3), 1)


def test_aux_graph():
    c = (0, 1, 2, 3, 4, 5, 6, 7)
    C = CycleCollection(1, (c,))
    y, z = unweave(c, 1)
    assert aux_adjacent(y, z, C) and aux_adjacent(z, y, C)
    assert aux_index(C) == {y: {z}, z: {y}}
    assert not conflict(y, z) and conflict(y, y)


def test_embedding_json_and_map():
    emb = embedding_from_aux_cycle([(10, 11, 12, 13), (20, 21, 22, 23), (30, 31, 32, 33), (40, 41, 42, 43)], 1, 2)
    assert emb.mapping[(1, 1)] == 10 and emb.mapping[(4, 4)] == 43
    assert emb.to_json_dict()["2,3"] == 31
    assert emb.vertex_map()[build_hkl(1, 2).vertex(3, 2)] == 22


@pytest.mark.parametrize("ell", [2, 3])
def test_finds_pattern_in_itself(ell):
    g = build_hkl(1, ell).graph
    C = small_codegree_cycles(g, 1, 3)
    res = find_pattern_embedding(g, C, 1, ell)
    assert res.found and not res.embedding.problems(g)
    assert embed_bruteforce(build_hkl(1, ell).graph, g).found


def test_too_small_host_is_absent():
    g = complete_bipartite(5, 5)
    C = build_good_many(g, BuilderParams(0.15, 1, beta_target=1000)).collection
    res = find_pattern_embedding(g, C, 1, 2)
    assert res.status == "absent"


def test_search_budget():
    g = build_hkl(1, 2).graph
    C = small_codegree_cycles(g, 1, 3)
    assert find_pattern_embedding(g, C, 1, 2, budget=1).status == "budget"


def test_search_argument_checks():
    C = CycleCollection(1, ())
    with pytest.raises(ValueError):
        find_pattern_embedding(build_hkl(1, 2).graph, C, 2, 2)
    with pytest.raises(ValueError):
        find_pattern_embedding(build_hkl(1, 2).graph, C, 1, 1)


def test_neighbour_hit_measure():
    g = build_hkl(1, 2).graph
    hits = neighbour_hit_measure(small_codegree_cycles(g, 1, 3))
    assert hits["factor"] == 8 and 0 < hits["worst"] <= 1


def test_pipeline_params_validation():
    with pytest.raises(ValueError):
        PipelineParams(0.15, 1, 1)
    with pytest.raises(ValueError):
        PipelineParams(0.15, 1, 2, branch_override="some")
    with pytest.raises(ValueError):
        PipelineParams(0.15, 1, 2, paper_literal=True)
    assert PipelineParams(0.1, 1, 2).resolved_delta == 0.05


def test_pipeline_edgeless_host():
    rep = run_pipeline(from_edge_list(5, []), PipelineParams(0.15, 1, 2))
    assert not rep.success and rep.failure["stage"] == "regularize"


def _planted(seed):
    return generate_host(HostSpec("planted-pattern-plus-noise", 40, 0.05, seed, build_hkl(1, 2).graph)).graph


def test_pipeline_planted_relaxed():
    g = _planted(1)
    params = PipelineParams(0.15, 1, 2, seed=1, beta_override=8, tau_override=4, branch_override="few")
    rep = run_pipeline(g, params)
    assert rep.success, rep.failure
    assert not rep.embedding.problems(g)
    assert [s.name for s in rep.stages] == ["regularize", "clean", "branch", "build", "prune", "embed", "verify"]


def test_pipeline_report_is_deterministic():
    g = _planted(2)
    params = PipelineParams(0.15, 1, 2, seed=2, beta_override=8, tau_override=4, branch_override="few")
    a, b = run_pipeline(g, params).to_json(), run_pipeline(g, params).to_json()
    assert a == b
    data = json.loads(a)
    assert data["format_version"] == 1 and all(s["elapsed_ms"] is None for s in data["stages"])


def test_pipeline_literal_branch_reports_failure():
    g = _planted(1)
    rep = run_pipeline(g, PipelineParams(0.15, 1, 2, seed=1))
    assert not rep.success and rep.failure["stage"] in {"build", "prune", "embed"}


def test_embedding_problems_detects_bad_map():
    g = build_hkl(1, 2).graph
    emb = Embedding(1, 2, {(i, j): 0 for i in range(1, 5) for j in range(1, 5)})
    assert emb.problems(g)
