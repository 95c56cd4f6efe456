"""Building collections of labelled 8k-cycles along the few-C4 and many-C4 branches."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .census import c4_census, log
from .goodnice import CycleCollection, GoodnessCertificate, check_collection_wellformed, check_good
from .graph import Graph, from_edge_list
from .regularize import regularity_constant


class NoAnchorError(ValueError):
    """The host has no 4-cycle, so no anchor vertex exists."""


@dataclass(frozen=True)
class BuilderParams:
    epsilon: float
    k: int
    tau: int | None = None  # default ceil(n^{2 eps})
    cycle_budget: int = 2_000_000
    beta_target: float | None = None  # default n^{-eps/2}
    K: float | None = None  # default regularity constant at alpha = 1/3 + eps
    log_base: str = "natural"

    def __post_init__(self):
        if not 0 < self.epsilon < 1 / 6:
            raise ValueError("epsilon must lie in (0, 1/6)")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.tau is not None and self.tau < 1:
            raise ValueError("tau must be >= 1")

    def resolved_tau(self, n: int) -> int:
        return int(self.tau) if self.tau is not None else max(1, math.ceil(n ** (2 * self.epsilon)))

    def resolved_beta(self, n: int) -> float:
        return self.beta_target if self.beta_target is not None else max(n, 1) ** (-self.epsilon / 2)

    def resolved_K(self) -> float:
        return self.K if self.K is not None else regularity_constant(1 / 3 + self.epsilon)


@dataclass
class BuildResult:
    branch: str
    collection: CycleCollection
    s: float
    certificate: GoodnessCertificate | None
    hypotheses: dict[str, bool]
    measurements: dict = field(default_factory=dict)
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None and len(self.collection) > 0


# ------------------------------------------------------------- few 4-cycles


def small_codegree_cycles(g: Graph, k: int, tau: int, budget: int = -1) -> CycleCollection:
    """Labelled genuine 8k-cycles with d(x_i, x_{i+2}) <= tau cyclically."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    ip, ix = g.csr
    allowed = (g.codegree_matrix <= tau).astype(np.uint8)
    cycles, _, complete = kernels.enumerate_cycles(ip, ix, 8 * k, allowed, budget)
    return CycleCollection(k, tuple(tuple(int(x) for x in c) for c in cycles), g, truncated=not complete)


def _few_hypotheses(g: Graph, params: BuilderParams) -> tuple[dict[str, bool], dict]:
    n, eps = g.n, params.epsilon
    K = params.resolved_K()
    census = c4_census(g)
    meas = {
        "n": n,
        "edges": g.edge_count,
        "max_degree": g.max_degree,
        "q": census.total,
        "max_c4_per_edge": census.max_per_edge,
        "edge_threshold": n ** (4 / 3 + eps) / 6,
        "degree_threshold": K * n ** (1 / 3 + eps),
        "c4_per_edge_threshold": n ** (1 / 3 + 2 * eps),
    }
    hyp = {
        "edges": g.edge_count >= meas["edge_threshold"],
        "max_degree": g.max_degree <= meas["degree_threshold"],
        "c4_per_edge": census.max_per_edge <= meas["c4_per_edge_threshold"],
        "k_at_least_1_over_eps": params.k >= 1 / eps,
    }
    return hyp, meas


def build_good_few(g: Graph, params: BuilderParams) -> BuildResult:
    tau = params.resolved_tau(g.n)
    beta = params.resolved_beta(g.n)
    hyp, meas = _few_hypotheses(g, params)
    meas.update(tau=tau, beta=beta)
    coll = small_codegree_cycles(g, params.k, tau, params.cycle_budget)
    meas.update(size=len(coll), truncated=coll.truncated)
    if not coll.tuples:
        return BuildResult("few", coll, tau, None, hyp, meas, failure="no 8k-cycle with small codegrees")
    cert = check_good(coll, beta, tau)
    return BuildResult("few", coll, tau, cert, hyp, meas)


# ------------------------------------------------------------ many 4-cycles


@dataclass
class TripleFamily:
    anchor: int
    scale: int
    triples: frozenset[tuple[int, int, int]]
    host: Graph
    bucket: int = 0
    anchor_triples: int = 0  # |D_0|
    condition3: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.triples)

    def is_symmetric(self) -> bool:
        return all((z, y, x) in self.triples for x, y, z in self.triples)

    def violations(self) -> list[tuple]:
        g, v, s = self.host, self.anchor, self.scale
        bad = []
        for x, y, z in sorted(self.triples):
            closes = len({v, x, y, z}) == 4 and all(
                g.has_edge(a, b) for a, b in ((v, x), (x, y), (y, z), (z, v))
            )
            caps = g.codegree_matrix[v, y] <= s and g.codegree_matrix[x, z] <= s
            if not (closes and caps and (z, y, x) in self.triples):
                bad.append((x, y, z))
        return bad


def find_c4_anchor(g: Graph, epsilon: float | None = None, log_base: str = "natural") -> TripleFamily:
    cod = g.codegree_matrix
    per_anchor: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    sets = g.nbr_sets
    for v in range(g.n):
        for x in g.adj[v]:
            for y in g.adj[x]:
                if y == v:
                    continue
                for z in g.adj[y]:
                    if z == x or z == v or z not in sets[v]:
                        continue
                    if cod[x, z] <= cod[v, y]:
                        per_anchor[v].append((x, y, z))
    if not per_anchor:
        raise NoAnchorError("graph has no 4-cycle")
    v = min(per_anchor, key=lambda a: (-len(per_anchor[a]), a))
    d0 = per_anchor[v]
    buckets: dict[int, list] = defaultdict(list)
    for t in d0:
        buckets[int(cod[v, t[1]]).bit_length()].append(t)
    i = min(buckets, key=lambda b: (-len(buckets[b]), b))
    s = 2**i
    triples = frozenset(buckets[i]) | frozenset((z, y, x) for x, y, z in buckets[i])
    fam = TripleFamily(v, s, triples, g, i, len(d0))
    bad = fam.violations()
    if bad:
        raise AssertionError(f"anchor family invariants broken at {bad[0]}")
    ys_per_x: dict[int, set] = defaultdict(set)
    for x, y, _ in triples:
        ys_per_x[x].add(y)
    measured = max(len(ys) for ys in ys_per_x.values())
    fam.condition3 = {"max_extensions_per_x": measured}
    if epsilon is not None and g.n > 1:
        q = c4_census(g).total
        bound = 384 * log(g.n, log_base) * q / (g.n ** (4 / 3 + epsilon) * s)
        fam.condition3.update(bound=bound, holds=measured <= bound)
    return fam


@dataclass
class ExtensionInfo:
    h_scale: int
    f_edges: int
    f_cycles: int
    truncated: bool


def extend_to_long_cycles(D: TripleFamily, k: int, budget: int = -1) -> tuple[CycleCollection, ExtensionInfo]:
    """Cycles x_1 ... x_{4k} in the graph F on N(anchor), each extended by distinct
    y_i with (x_i, y_i, x_{i+1}) in D, giving tuples (x_1, y_1, ..., x_{4k}, y_{4k})."""
    g = D.host
    mids: dict[tuple[int, int], list[int]] = defaultdict(list)
    for x, y, z in D.triples:
        mids[(x, z)].append(y)
    for ys in mids.values():
        ys.sort()
    if not mids:
        return CycleCollection(k, (), g), ExtensionInfo(0, 0, 0, False)
    # bucket triples by h(x, z) = len(mids[(x, z)])
    weight: dict[int, int] = defaultdict(int)
    for ys in mids.values():
        weight[len(ys).bit_length()] += len(ys)
    i = min(weight, key=lambda b: (-weight[b], b))
    s_h = 2 ** (i - 1)
    f_edges = [(x, z) for (x, z), ys in mids.items() if x < z and len(ys) >= s_h]
    F = from_edge_list(g.n, f_edges)
    ip, ix = F.csr
    L = 4 * k
    cycles, nodes, complete = kernels.enumerate_cycles(ip, ix, L, None, budget)
    remaining = -1 if budget < 0 else max(budget - nodes, 0)
    truncated = not complete
    out = []
    spent = 0
    for cyc in cycles:
        xs = [int(c) for c in cyc]
        taken = set(xs)
        ys: list[int] = []

        def rec(j):
            nonlocal spent, truncated
            if j == L:
                t = []
                for a, b in zip(xs, ys):
                    t += [a, b]
                out.append(tuple(t))
                return
            for y in mids[(xs[j], xs[(j + 1) % L])]:
                if y in taken:
                    continue
                spent += 1
                if remaining >= 0 and spent > remaining:
                    truncated = True
                    return
                taken.add(y)
                ys.append(y)
                rec(j + 1)
                ys.pop()
                taken.discard(y)
                if truncated:
                    return

        rec(0)
        if truncated:
            break
    coll = CycleCollection(k, tuple(out), g, truncated)
    for t in coll.tuples:
        for j in range(L):
            if (t[2 * j], t[2 * j + 1], t[(2 * j + 2) % (2 * L)]) not in D.triples:
                raise AssertionError("extended tuple leaves the triple family")
    return coll, ExtensionInfo(s_h, F.edge_count, len(cycles), truncated)


def _many_hypotheses(g: Graph, params: BuilderParams) -> tuple[dict[str, bool], dict]:
    n, eps = g.n, params.epsilon
    K = params.resolved_K()
    census = c4_census(g)
    q = census.total
    lg = log(n, params.log_base) if n > 1 else 0.0
    meas = {
        "n": n,
        "max_degree": g.max_degree,
        "q": q,
        "max_c4_per_edge": census.max_per_edge,
        "degree_threshold": K * n ** (1 / 3 + eps),
        "q_threshold": n ** (5 / 3 + 3 * eps) / (96 * lg) if lg else float("inf"),
        "c4_per_edge_threshold": 96 * lg / n ** (4 / 3 + eps) * q if n else 0.0,
    }
    hyp = {
        "max_degree": g.max_degree <= meas["degree_threshold"],
        "q": q >= meas["q_threshold"],
        "c4_per_edge": census.max_per_edge <= meas["c4_per_edge_threshold"],
        "k_at_least_1_over_eps": params.k >= 1 / eps,
    }
    return hyp, meas


def build_good_many(g: Graph, params: BuilderParams) -> BuildResult:
    beta = params.resolved_beta(g.n)
    hyp, meas = _many_hypotheses(g, params)
    fam = find_c4_anchor(g, params.epsilon, params.log_base)
    coll, info = extend_to_long_cycles(fam, params.k, params.cycle_budget)
    meas.update(
        beta=beta,
        anchor=fam.anchor,
        scale=fam.scale,
        family_size=len(fam),
        anchor_triples=fam.anchor_triples,
        condition3=fam.condition3,
        h_scale=info.h_scale,
        f_edges=info.f_edges,
        f_cycles=info.f_cycles,
        size=len(coll),
        truncated=coll.truncated,
    )
    if not check_collection_wellformed(coll):
        raise AssertionError("many-branch collection is not well formed")
    if not coll.tuples:
        return BuildResult("many", coll, fam.scale, None, hyp, meas, failure="no distinct extension of an F-cycle")
    cert = check_good(coll, beta, fam.scale)
    return BuildResult("many", coll, fam.scale, cert, hyp, meas)
