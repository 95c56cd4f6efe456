"""Host preprocessing: almost-regular extraction, random degree capping,
biregular bipartite extraction and C4 cleaning."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .census import c4_census, log
from .graph import Graph, GraphError, bipartition, from_edge_list


def regularity_constant(alpha: float) -> float:
    return 10 * 2 ** (1 / alpha**2 + 1)


@dataclass
class RegularizationResult:
    subgraph: Graph
    vertex_map: tuple[int, ...]  # subgraph vertex i -> input vertex id
    alpha: float
    K: float
    flags: dict[str, bool]
    success: bool = True
    attempts: int = 0
    keep_probability: float | None = None

    @property
    def m(self) -> int:
        return self.subgraph.n

    def to_dict(self) -> dict:
        g = self.subgraph
        return {
            "m": g.n,
            "edges": g.edge_count,
            "max_degree": g.max_degree,
            "min_degree": g.min_degree,
            "alpha": self.alpha,
            "K": self.K,
            "flags": self.flags,
            "success": self.success,
            "attempts": self.attempts,
            "keep_probability": self.keep_probability,
            "vertex_map": list(self.vertex_map),
        }


def _almost_regular_flags(g: Graph, n_input: int, alpha: float, K: float, e_input: int) -> dict[str, bool]:
    m = g.n
    return {
        "input_dense": e_input >= n_input ** (1 + alpha),
        "almost_regular": m > 0 and g.max_degree <= K * g.min_degree,
        "vertex_count": m >= n_input ** (alpha * (1 - alpha) / (1 + alpha)),
        "edge_count": g.edge_count >= 0.4 * m ** (1 + alpha),
    }


def almost_regular_subgraph(g: Graph, alpha: float) -> RegularizationResult:
    """Peel vertices of degree below Δ/K (and isolated ones) until Δ <= Kδ.

    Flags are recomputed from the returned subgraph; nothing is trusted from
    the peeling itself.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if g.edge_count == 0:
        raise GraphError("graph has no edges")
    K = regularity_constant(alpha)
    alive = set(v for v in range(g.n) if g.degrees[v] > 0)
    deg = {v: g.degrees[v] for v in alive}
    while True:
        top = max(deg[v] for v in alive)
        low = [v for v in sorted(alive) if deg[v] == 0 or deg[v] * K < top]
        if not low:
            break
        for v in low:
            alive.discard(v)
            for w in g.adj[v]:
                if w in alive:
                    deg[w] -= 1
            del deg[v]
        if not alive:
            break
    if not alive:
        # cannot happen: the max-degree vertex is never below Δ/K; kept for safety
        alive = {u for e in g.edges[:1] for u in e}
    sub, vmap = g.induced_subgraph(alive)
    return RegularizationResult(sub, vmap, alpha, K, _almost_regular_flags(sub, g.n, alpha, K, g.edge_count))


def _degree_flags(h: Graph, m: int, alpha: float, K: float) -> dict[str, bool]:
    return {
        "edge_lower": h.edge_count >= m ** (1 + alpha) / 3,
        "degree_upper": h.max_degree <= K * m**alpha,
    }


def bounded_degree_subgraph(g: Graph, alpha: float, seed: int, max_attempts: int = 20) -> RegularizationResult:
    """Random edge subsample of the almost-regular part, repeated until both
    e >= m^{1+α}/3 and Δ <= K m^α hold or the attempts run out.

    The keep probability (2/5) m^{1+α} / e(G') is clamped to 1, in which case
    the subsample is G' itself and a single attempt is made. On failure the
    attempt satisfying the most conditions (then the most edges) is returned
    with ``success=False``.
    """
    base = almost_regular_subgraph(g, alpha)
    gp = base.subgraph
    m = gp.n
    K = base.K
    p = 0.4 * m ** (1 + alpha) / gp.edge_count
    rng = np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))
    best = None
    best_key = None
    attempts = 0
    for attempts in range(1, max(1, max_attempts) + 1):
        if p >= 1:
            h = gp
        else:
            draws = rng.random(gp.edge_count)
            h = from_edge_list(m, [e for e, x in zip(gp.edges, draws) if x < p])
        flags = _degree_flags(h, m, alpha, K)
        key = (sum(flags.values()), h.edge_count)
        if best is None or key > best_key:
            best, best_key = (h, flags), key
        if all(flags.values()) or p >= 1:
            break
    h, flags = best
    all_flags = {**base.flags, **flags}
    return RegularizationResult(
        h, base.vertex_map, alpha, K, all_flags,
        success=all(flags.values()), attempts=attempts, keep_probability=min(p, 1.0),
    )


# ---------------------------------------------------------- biregular part


@dataclass
class BiregularExtract:
    X1: frozenset[int]
    X2: frozenset[int]
    D1: float
    D2: float
    subgraph: Graph  # spanning the input's vertex ids; only X1-X2 edges
    achieved: dict[str, float]
    buckets: tuple[int, int] = (0, 0)
    flags: dict[str, bool] = field(default_factory=dict)


def _greedy_cut(g: Graph, verts: list[int]) -> tuple[set[int], set[int]]:
    """Deterministic two-way split of ``verts`` maximising crossing edges locally."""
    vs = set(verts)
    side = {}
    for root in verts:
        if root in side:
            continue
        side[root] = 0
        queue = [root]
        for u in queue:
            for w in g.adj[u]:
                if w in vs and w not in side:
                    side[w] = 1 - side[u]
                    queue.append(w)
    improved = True
    while improved:
        improved = False
        for v in verts:
            same = sum(1 for w in g.adj[v] if w in vs and side[w] == side[v])
            other = sum(1 for w in g.adj[v] if w in vs and side[w] != side[v])
            if same > other:
                side[v] = 1 - side[v]
                improved = True
    return {v for v in verts if side[v] == 0}, {v for v in verts if side[v] == 1}


def biregular_extract(g: Graph, log_base: str = "natural") -> BiregularExtract:
    """Dyadic degree classes; keep the pair of classes (or a split class) with the
    most crossing edges, then peel vertices whose degree into the other side is
    below max(1, D/(256 (log n)^2))."""
    if g.edge_count == 0:
        raise GraphError("graph has no edges")
    n = g.n
    d_avg = 2 * g.edge_count / n
    bucket: dict[int, list[int]] = {}
    for v in range(n):
        if g.degrees[v]:
            bucket.setdefault((g.degrees[v] - 1).bit_length(), []).append(v)
    keys = sorted(bucket)
    best = None
    for ai, a in enumerate(keys):
        for b in keys[ai:]:
            if a == b:
                s1, s2 = _greedy_cut(g, bucket[a])
            else:
                s1, s2 = set(bucket[a]), set(bucket[b])
            cross = sum(1 for u, v in g.edges if (u in s1 and v in s2) or (u in s2 and v in s1))
            if cross and (best is None or cross > best[0]):
                best = (cross, (a, b), s1, s2)
    _, pair, x1, x2 = best
    lg = log(n, log_base) if n > 1 else 1.0
    D1 = max(max(g.degrees[v] for v in x1), d_avg / 4)
    D2 = max(max(g.degrees[v] for v in x2), d_avg / 4)
    floor1 = max(1.0, D1 / (256 * lg**2))
    floor2 = max(1.0, D2 / (256 * lg**2))
    while True:
        drop1 = {v for v in x1 if sum(1 for w in g.adj[v] if w in x2) < floor1}
        drop2 = {v for v in x2 if sum(1 for w in g.adj[v] if w in x1) < floor2}
        if not drop1 and not drop2:
            break
        x1 -= drop1
        x2 -= drop2
    if not x1 or not x2:
        # peeling emptied a side; fall back to one crossing edge of the chosen pair
        u, v = next((u, v) for u, v in g.edges if (u in bucket[pair[0]] and v in bucket[pair[1]])
                    or (v in bucket[pair[0]] and u in bucket[pair[1]]))
        x1, x2 = {u}, {v}
    sub = from_edge_list(n, [(u, v) for u, v in g.edges if (u in x1 and v in x2) or (u in x2 and v in x1)])
    min1 = min(sub.degrees[v] for v in x1)
    min2 = min(sub.degrees[v] for v in x2)
    target = 1 / (256 * lg**2)
    achieved = {
        "min_degree_X1": min1,
        "min_degree_X2": min2,
        "ratio_X1": min1 / D1,
        "ratio_X2": min2 / D2,
        "target_ratio": target,
    }
    flags = {
        "scales_at_least_quarter_average": D1 >= d_avg / 4 and D2 >= d_avg / 4,
        "host_degree_within_scale": all(g.degrees[v] <= D1 for v in x1) and all(g.degrees[v] <= D2 for v in x2),
        "ratio_X1": min1 / D1 >= target,
        "ratio_X2": min2 / D2 >= target,
        "bipartite": bipartition(sub) is not None,
    }
    return BiregularExtract(frozenset(x1), frozenset(x2), D1, D2, sub, achieved, pair, flags)


# -------------------------------------------------------------- C4 cleaning


@dataclass
class CleanResult:
    graph: Graph
    removed: list[dict]
    threshold_proportion: float  # 16 log n / e(G), used during the loop
    q_final: int
    max_edge_final: int
    certificate_bound: float  # (16 log n / e(G')) q(G')
    certificate_ok: bool
    edges_ok: bool  # e(G') >= e(G)/2
    removal_cap: int  # ceil(e(G)/4)

    def log_dict(self) -> dict:
        return {
            "removed": self.removed,
            "threshold_proportion": self.threshold_proportion,
            "q_final": self.q_final,
            "max_edge_final": self.max_edge_final,
            "certificate_bound": self.certificate_bound,
            "certificate_ok": self.certificate_ok,
            "edges_ok": self.edges_ok,
            "removal_cap": self.removal_cap,
        }


def _c4s_through(adj: list[set[int]], u: int, v: int):
    """Each 4-cycle u-v-x-w-u containing edge uv, as (x, w)."""
    for w in adj[u]:
        if w == v:
            continue
        for x in adj[v] & adj[w]:
            if x != u:
                yield x, w


def clean_c4s(g: Graph, log_base: str = "natural") -> CleanResult:
    """Delete, one at a time, an edge lying in more than a 16 log n / e(G) share of
    the current 4-cycles: the one with the largest count, lowest (u, v) on ties.

    Counts are maintained incrementally and re-derived from scratch at the end.
    """
    e0 = g.edge_count
    n = g.n
    cap = math.ceil(e0 / 4)
    if e0 <= 3:
        census = c4_census(g)
        return CleanResult(g, [], float("inf") if e0 == 0 else 16 * log(max(n, 2), log_base) / e0,
                           census.total, census.max_per_edge, 0.0, True, True, cap)
    prop = 16 * log(n, log_base) / e0
    census = c4_census(g)
    counts = dict(census.per_edge)
    q = census.total
    adj = [set(a) for a in g.adj]
    removed = []
    while q > 0:
        top = max(counts.values())
        if not top > prop * q:
            break
        u, v = min(e for e, c in counts.items() if c == top)
        through = list(_c4s_through(adj, u, v))
        removed.append({"edge": [u, v], "count": top, "q_before": q})
        for x, w in through:
            for a, b in ((v, x), (x, w), (w, u)):
                counts[(min(a, b), max(a, b))] -= 1
        q -= len(through)
        del counts[(u, v)]
        adj[u].discard(v)
        adj[v].discard(u)
    out = from_edge_list(n, counts.keys())
    final = c4_census(out)
    if final.total != q or final.per_edge != counts:
        raise AssertionError("incremental C4 bookkeeping diverged from a full recount")
    e1 = out.edge_count
    bound = 16 * log(n, log_base) / e1 * final.total if e1 else 0.0
    return CleanResult(
        out,
        removed,
        prop,
        final.total,
        final.max_per_edge,
        bound,
        final.max_per_edge <= bound,
        2 * e1 >= e0,
        cap,
    )
