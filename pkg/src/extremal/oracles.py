"""Brute-force ground truth used to validate everything else."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import Graph, from_edge_list


class OracleBudgetError(RuntimeError):
    pass


@dataclass
class EmbedResult:
    status: str  # 'found', 'absent', 'unknown' (budget ran out)
    mapping: dict[int, int] | None
    nodes: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def _search_order(h: Graph) -> list[int]:
    order: list[int] = []
    placed = set()
    remaining = set(range(h.n))
    while remaining:
        best = max(
            remaining,
            key=lambda v: (sum(1 for w in h.adj[v] if w in placed), h.degrees[v], -v),
        )
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order


def embed_bruteforce(h: Graph, g: Graph, budget: int = -1) -> EmbedResult:
    """Injective edge-preserving map V(H) -> V(G) by backtracking with degree pruning."""
    if h.n > g.n:
        return EmbedResult("absent", None, 0)
    order = _search_order(h)
    earlier = {v: [w for w in h.adj[v] if order.index(w) < order.index(v)] for v in order}
    gsets = g.nbr_sets
    mapping: dict[int, int] = {}
    used = set()
    nodes = 0
    limit = budget if budget >= 0 else float("inf")

    def rec(i):
        nonlocal nodes
        if i == len(order):
            return True
        v = order[i]
        anchors = [mapping[w] for w in earlier[v]]
        if anchors:
            cands = set(gsets[anchors[0]])
            for a in anchors[1:]:
                cands &= gsets[a]
            cands = sorted(cands)
        else:
            cands = range(g.n)
        need = h.degrees[v]
        for x in cands:
            if x in used or g.degrees[x] < need:
                continue
            nodes += 1
            if nodes > limit:
                raise OracleBudgetError
            mapping[v] = x
            used.add(x)
            if rec(i + 1):
                return True
            used.discard(x)
            del mapping[v]
        return False

    try:
        ok = rec(0)
    except OracleBudgetError:
        return EmbedResult("unknown", None, nodes)
    return EmbedResult("found" if ok else "absent", dict(sorted(mapping.items())) if ok else None, nodes)


def verify_embedding(h: Graph, g: Graph, mapping: dict[int, int]) -> list[str]:
    """Problems with a claimed embedding (empty list means valid)."""
    problems = []
    if set(mapping) != set(range(h.n)):
        problems.append("mapping does not cover every pattern vertex")
    images = list(mapping.values())
    if len(set(images)) != len(images):
        problems.append("mapping is not injective")
    if any(not (0 <= x < g.n) for x in images):
        problems.append("image outside host")
        return problems
    for u, v in h.edges:
        if u in mapping and v in mapping and not g.has_edge(mapping[u], mapping[v]):
            problems.append(f"pattern edge ({u},{v}) -> ({mapping[u]},{mapping[v]}) is not a host edge")
    return problems


# -------------------------------------------------------------- hom counts


def hom_count_bruteforce(g: Graph, k: int) -> int:
    """hom(C_{2k}, G) by walk-count dynamic programming from each start vertex."""
    if k < 1:
        raise ValueError("k must be >= 1")
    total = 0
    for s in range(g.n):
        counts = {s: 1}
        for _ in range(2 * k):
            nxt: dict[int, int] = {}
            for v, c in counts.items():
                for w in g.adj[v]:
                    nxt[w] = nxt.get(w, 0) + c
            counts = nxt
        total += counts.get(s, 0)
    return total


def hom_count_enumerate(g: Graph, k: int, budget: int = 10**8, chunk: int = 1 << 20) -> int:
    """hom(C_{2k}, G) by testing every one of the n^{2k} tuples (vectorised in chunks)."""
    L = 2 * k
    total_tuples = g.n**L
    if total_tuples > budget:
        raise OracleBudgetError(f"{g.n}^{L} tuples exceed budget {budget}")
    if g.n == 0:
        return 0
    a = g.adjacency_matrix().astype(bool)
    count = 0
    for start in range(0, total_tuples, chunk):
        idx = np.arange(start, min(start + chunk, total_tuples), dtype=np.int64)
        coords = np.unravel_index(idx, (g.n,) * L)
        ok = np.ones(idx.shape[0], dtype=bool)
        for i in range(L):
            ok &= a[coords[i], coords[(i + 1) % L]]
        count += int(ok.sum())
    return count


def genuine_cycles_enumerate(g: Graph, length: int, budget: int = 10**7) -> list[tuple[int, ...]]:
    """Labelled genuine cycles by scanning ordered vertex tuples (permutations)."""
    from math import perm

    if perm(g.n, length) > budget:
        raise OracleBudgetError("too many ordered tuples")
    sets = g.nbr_sets
    return sorted(
        t
        for t in itertools.permutations(range(g.n), length)
        if all(t[(i + 1) % length] in sets[t[i]] for i in range(length))
    )


# ------------------------------------------------------------ Turán numbers


@dataclass
class TuranRecord:
    n: int
    pattern: Graph
    value: int
    witness: Graph
    strategy: str


def canonical_form(n: int, edges) -> tuple[tuple[int, int], ...]:
    """Isomorphism-invariant edge tuple: the minimum relabelling among permutations
    that list vertices by descending degree (ties permuted exhaustively)."""
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(deg[v], []).append(v)
    groups = [classes[d] for d in sorted(classes, reverse=True)]
    best = None
    for choice in itertools.product(*(itertools.permutations(gr) for gr in groups)):
        order = [v for part in choice for v in part]
        pos = {v: i for i, v in enumerate(order)}
        code = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges))
        if best is None or code < best:
            best = code
    return best if best is not None else ()


def _contains(pattern: Graph, n: int, edges) -> bool:
    return embed_bruteforce(pattern, from_edge_list(n, edges)).found


def turan_exhaustive(n: int, pattern: Graph, strategy: str = "descending") -> TuranRecord:
    """ex(n, H) by exhaustive search over isomorphism classes (n <= 8)."""
    if n > 8:
        raise OracleBudgetError("exhaustive Turán search is limited to n <= 8")
    if n < 0:
        raise ValueError("n must be non-negative")
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if strategy == "descending":
        level = {canonical_form(n, all_pairs)}
        while True:
            free = sorted(c for c in level if not _contains(pattern, n, c))
            if free:
                return TuranRecord(n, pattern, len(free[0]), from_edge_list(n, free[0]), strategy)
            nxt = set()
            for c in level:
                for e in c:
                    nxt.add(canonical_form(n, [f for f in c if f != e]))
            level = nxt
    if strategy == "ascending":
        level = {()}
        if _contains(pattern, n, ()):
            raise ValueError("pattern is edgeless; every graph contains it")
        while True:
            nxt = set()
            for c in level:
                present = set(c)
                for e in all_pairs:
                    if e in present:
                        continue
                    cand = canonical_form(n, list(c) + [e])
                    if cand not in nxt and not _contains(pattern, n, cand):
                        nxt.add(cand)
            if not nxt:
                best = min(level)
                return TuranRecord(n, pattern, len(best), from_edge_list(n, best), strategy)
            level = nxt
    raise ValueError(f"unknown strategy {strategy!r}")
