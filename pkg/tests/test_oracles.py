import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal.graph import complete_bipartite, complete_graph, cycle_graph, from_edge_list, path_graph
from extremal.hkl import build_hkl
from extremal.oracles import (
    OracleBudgetError,
    canonical_form,
    embed_bruteforce,
    genuine_cycles_enumerate,
    hom_count_bruteforce,
    hom_count_enumerate,
    turan_exhaustive,
    verify_embedding,
)

from helpers import random_graph

C4 = cycle_graph(4)
K3 = complete_graph(3)


def test_embed_basic():
    res = embed_bruteforce(C4, complete_bipartite(2, 2))
    assert res.found and not verify_embedding(C4, complete_bipartite(2, 2), res.mapping)
    assert embed_bruteforce(K3, complete_bipartite(3, 3)).status == "absent"
    assert embed_bruteforce(complete_graph(5), complete_graph(4)).status == "absent"


def test_embed_budget_is_unknown():
    assert embed_bruteforce(build_hkl(1, 2).graph, complete_graph(16), budget=3).status == "unknown"


@settings(max_examples=30)
@given(n=st.integers(1, 8), p=st.floats(0, 1), seed=st.integers(0, 10**6))
def test_embed_matches_networkx(n, p, seed):
    g = random_graph(n, p, seed)
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(g.edges)
    for pattern in (C4, K3, path_graph(4)):
        matcher = nx.algorithms.isomorphism.GraphMatcher(G, nx.Graph(list(pattern.edges)))
        expected = matcher.subgraph_is_monomorphic()
        res = embed_bruteforce(pattern, g)
        assert res.found == expected
        if res.found:
            assert not verify_embedding(pattern, g, res.mapping)


def test_verify_embedding_problems():
    g = path_graph(4)
    assert verify_embedding(K3, g, {0: 0, 1: 1, 2: 2})
    assert "not injective" in verify_embedding(K3, complete_graph(3), {0: 0, 1: 0, 2: 1})[0]
    assert verify_embedding(K3, g, {0: 0, 1: 1})


def test_hom_small_values():
    assert hom_count_bruteforce(K3, 2) == hom_count_enumerate(K3, 2) == 18
    assert hom_count_bruteforce(C4, 2) == hom_count_enumerate(C4, 2) == 32
    assert hom_count_bruteforce(path_graph(2), 1) == 2


def test_hom_enumerate_budget():
    with pytest.raises(OracleBudgetError):
        hom_count_enumerate(complete_graph(20), 4)


def test_genuine_cycles_enumerate():
    assert len(genuine_cycles_enumerate(complete_graph(4), 4)) == 24
    assert genuine_cycles_enumerate(path_graph(4), 3) == []


def test_canonical_form_invariant():
    edges = [(0, 1), (1, 2), (2, 3)]
    for perm in itertools.permutations(range(4)):
        relabelled = [(perm[u], perm[v]) for u, v in edges]
        assert canonical_form(4, relabelled) == canonical_form(4, edges)
    assert canonical_form(4, edges) != canonical_form(4, [(0, 1), (0, 2), (0, 3)])


@pytest.mark.parametrize("strategy", ["descending", "ascending"])
def test_turan_values(strategy):
    assert turan_exhaustive(3, C4, strategy).value == 3
    assert turan_exhaustive(4, C4, strategy).value == 4
    assert turan_exhaustive(5, C4, strategy).value == 6
    assert turan_exhaustive(4, K3, strategy).value == 4


def test_turan_witness_is_free():
    rec = turan_exhaustive(5, C4)
    assert rec.witness.edge_count == 6
    assert embed_bruteforce(C4, rec.witness).status == "absent"


def test_turan_limits():
    with pytest.raises(OracleBudgetError):
        turan_exhaustive(9, C4)
    with pytest.raises(ValueError):
        turan_exhaustive(4, C4, "sideways")
    with pytest.raises(ValueError):
        turan_exhaustive(3, from_edge_list(2, []), "ascending")
