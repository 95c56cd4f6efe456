"""Shared graph builders for the test-suite."""

import numpy as np

from extremal.graph import Graph, disjoint_union, from_edge_list


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    return from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_bipartite_min_degree(a: int, b: int, s: int, t: int, seed: int):
    """Bipartite graph on sides [0, a) and [a, a+b) with side minimum degrees >= s and >= t."""
    rng = np.random.default_rng(seed)
    left, right = list(range(a)), list(range(a, a + b))
    edges = set()
    for u in left:
        for v in rng.choice(right, size=s, replace=False):
            edges.add((u, int(v)))
    for v in right:
        for u in rng.choice(left, size=t, replace=False):
            edges.add((int(u), v))
    for u in left:
        for v in right:
            if rng.random() < 0.15:
                edges.add((u, v))
    return from_edge_list(a + b, edges), (frozenset(left), frozenset(right))


def greedy_c4_free(n: int, m: int, seed: int) -> Graph:
    """Add random pairs while no 4-cycle appears, until m edges are placed."""
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    order = rng.permutation(len(pairs))
    adj = [set() for _ in range(n)]
    edges = []
    for i in order:
        u, v = pairs[i]
        # uv closes a 4-cycle iff some neighbour of u is adjacent to some neighbour of v
        if any(adj[a] & (adj[v] - {u}) for a in adj[u] if a != v):
            continue
        adj[u].add(v)
        adj[v].add(u)
        edges.append((u, v))
        if len(edges) == m:
            return from_edge_list(n, edges)
    raise RuntimeError("could not place enough edges")


def c4_plus_c4_free() -> Graph:
    """One 4-cycle next to a 4-cycle-free graph on 36 vertices with 56 edges (n=40, e=60)."""
    c4 = from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    return disjoint_union(c4, greedy_c4_free(36, 56, seed=7))


def cli_scenario(d):
    """Every CLI command with a fixed seed, as (argv, expected exit, output files) in run order."""
    d = str(d)
    p = lambda name: f"{d}/{name}"  # noqa: E731
    return [
        (["gen-hkl", "--k", "1", "--ell", "2", "--format", "json", "--out", p("h12.json"),
          "--report", p("gen-hkl.json")], 0, ["h12.json", "gen-hkl.json"]),
        (["gen-host", "--model", "planted-pattern-plus-noise", "--n", "40", "--p", "0.05", "--seed", "1",
          "--pattern-hkl", "1,2", "--out", p("planted.el"), "--report", p("gen-host.json")],
         0, ["planted.el", "gen-host.json"]),
        (["gen-host", "--model", "erdos-renyi", "--n", "30", "--p", "0.3", "--seed", "4",
          "--out", p("er.el")], 0, ["er.el"]),
        (["census", "--graph", p("er.el"), "--k", "2", "3", "--brute-force", "--csv", p("census.csv"),
          "--report", p("census.json")], 0, ["census.csv", "census.json"]),
        (["clean", "--graph", p("er.el"), "--out", p("clean.el"), "--log", p("clean.json")],
         0, ["clean.el", "clean.json"]),
        (["regularize", "--graph", p("er.el"), "--alpha", "0.45", "--seed", "3", "--out", p("reg.el"),
          "--report", p("reg.json")], None, ["reg.el", "reg.json"]),
        (["build-collection", "--graph", p("h12.json"), "--k", "1", "--epsilon", "0.15", "--branch", "few",
          "--tau", "3", "--beta", "8", "--out", p("coll.json"), "--report", p("build.json")],
         0, ["coll.json", "build.json"]),
        (["check-good", "--graph", p("h12.json"), "--collection", p("coll.json"), "--beta", "8",
          "--report", p("good.json")], None, ["good.json"]),
        (["prune-nice", "--graph", p("h12.json"), "--collection", p("coll.json"), "--beta", "8",
          "--out", p("nice.json"), "--report", p("prune.json")], 0, ["nice.json", "prune.json"]),
        (["pipeline", "--graph", p("planted.el"), "--k", "1", "--ell", "2", "--epsilon", "0.15", "--seed", "1",
          "--beta", "8", "--tau", "4", "--branch-override", "few", "--report", p("pipeline.json")],
         0, ["pipeline.json"]),
        (["pipeline", "--graph", p("planted.el"), "--k", "1", "--ell", "2", "--epsilon", "0.15", "--seed", "1",
          "--report", p("pipeline-literal.json")], 1, ["pipeline-literal.json"]),
        (["verify-embedding", "--graph", p("planted.el"), "--k", "1", "--ell", "2",
          "--embedding", p("pipeline.json"), "--report", p("verify.json")], 0, ["verify.json"]),
        (["oracle", "embed", "--graph", p("planted.el"), "--pattern-name", "c4", "--report", p("embed.json")],
         None, ["embed.json"]),
        (["oracle", "hom", "--graph", p("er.el"), "--k", "2", "--report", p("hom.json")], 0, ["hom.json"]),
        (["oracle", "turan", "--n", "5", "--pattern-name", "c4", "--strategy", "ascending",
          "--report", p("turan.json")], 0, ["turan.json"]),
        (["check-lemmas", "--graph", p("h12.json"), "--k", "2", "--report", p("lemmas.json")],
         None, ["lemmas.json"]),
    ]
