"""The 3-regular bipartite family H_{k,l} and the rooted-tree-power density bound."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, GraphError, from_edge_list, is_connected


@dataclass(frozen=True)
class HklGraph:
    k: int
    ell: int
    graph: Graph
    labels: dict[tuple[int, int], int]  # (row i, column j), both 1-based -> vertex id

    @property
    def rows(self) -> int:
        return 4 * self.k

    @property
    def columns(self) -> int:
        return 2 * self.ell

    def vertex(self, i: int, j: int) -> int:
        return self.labels[(i, j)]

    def label_of(self) -> dict[int, tuple[int, int]]:
        return {v: ij for ij, v in self.labels.items()}

    def labels_json(self) -> dict[str, int]:
        return {f"{i},{j}": v for (i, j), v in sorted(self.labels.items())}


def hkl_vertex_id(k: int, i: int, j: int) -> int:
    """Column-block layout: x_{i,j} -> (j-1)*4k + (i-1)."""
    return (j - 1) * 4 * k + (i - 1)


def hkl_edge_families(k: int, ell: int) -> dict[str, list[tuple[tuple[int, int], tuple[int, int]]]]:
    """The four edge families as label pairs; column index wraps modulo 2l."""
    cols = 2 * ell

    def nxt(j):
        return j % cols + 1

    return {
        "matching": [((2 * i - 1, j), (2 * i, j)) for i in range(1, 2 * k + 1) for j in range(1, cols + 1)],
        "outer_rows": [((1, j), (1, nxt(j))) for j in range(1, cols + 1)]
        + [((4 * k, j), (4 * k, nxt(j))) for j in range(1, cols + 1)],
        "diagonal_down": [((2 * i, j), (2 * i + 1, nxt(j))) for i in range(1, 2 * k) for j in range(1, cols + 1)],
        "diagonal_up": [((2 * i + 1, j), (2 * i, nxt(j))) for i in range(1, 2 * k) for j in range(1, cols + 1)],
    }


def build_hkl(k: int, ell: int) -> HklGraph:
    if k < 1 or ell < 2:
        raise GraphError(f"H_{{k,l}} needs k >= 1 and l >= 2 (got k={k}, l={ell})")
    labels = {(i, j): hkl_vertex_id(k, i, j) for j in range(1, 2 * ell + 1) for i in range(1, 4 * k + 1)}
    edges = [
        (labels[a], labels[b])
        for family in hkl_edge_families(k, ell).values()
        for a, b in family
    ]
    return HklGraph(k, ell, from_edge_list(8 * k * ell, edges), labels)


def hkl_summary(h: HklGraph) -> dict:
    """Observed structural facts; connectivity is recorded, not asserted anywhere."""
    from .graph import bipartition

    g = h.graph
    return {
        "k": h.k,
        "ell": h.ell,
        "vertices": g.n,
        "edges": g.edge_count,
        "degrees": sorted(set(g.degrees)),
        "bipartite": bipartition(g) is not None,
        "connected": is_connected(g),
    }


# ------------------------------------------------------------ tree density


@dataclass(frozen=True)
class TreeStats:
    v: int
    e: int
    leaves: int
    r: int
    rho: Fraction
    bound: Fraction | None  # (l-2)/((r-1)(l-1)-1); None when the denominator vanishes
    within_bound: bool | None
    below_reciprocal: bool | None  # rho < 1/(r-1), only meaningful for r >= 3


class TreeError(ValueError):
    pass


def rooted_power_density(tree: Graph, r: int) -> TreeStats:
    """Exact (v - leaves)/e for a tree whose internal vertices all have degree >= r."""
    if r < 2:
        raise TreeError("r must be at least 2")
    if tree.n < 2 or tree.edge_count != tree.n - 1 or not is_connected(tree):
        raise TreeError("input is not a tree on at least two vertices")
    degs = tree.degrees
    for v, d in enumerate(degs):
        if d > 1 and d < r:
            raise TreeError(f"non-leaf {v} has degree {d} < r={r}")
    leaves = sum(1 for d in degs if d == 1)
    v, e = tree.n, tree.edge_count
    rho = Fraction(v - leaves, e)
    den = (r - 1) * (leaves - 1) - 1
    bound = Fraction(leaves - 2, den) if den != 0 else None
    return TreeStats(
        v=v,
        e=e,
        leaves=leaves,
        r=r,
        rho=rho,
        bound=bound,
        within_bound=None if bound is None else rho <= bound,
        below_reciprocal=rho < Fraction(1, r - 1) if r >= 3 else None,
    )


def _prufer_trees(m: int):
    """All labelled trees on range(m) as edge lists (m >= 1)."""
    from itertools import product

    if m == 1:
        yield []
        return
    if m == 2:
        yield [(0, 1)]
        return
    for seq in product(range(m), repeat=m - 2):
        degree = [1] * m
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(m) if degree[i] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [i for i in range(m) if degree[i] == 1]
        edges.append((u, w))
        yield edges


def trees_with_min_internal_degree(max_vertices: int, r: int):
    """Every tree on <= max_vertices vertices whose non-leaves have degree >= r.

    Built from a labelled skeleton of internal vertices plus pendant leaves, so
    each isomorphism class appears at least once (duplicates are possible).
    Includes the single edge K_2 (no internal vertices).
    """
    if max_vertices >= 2:
        yield from_edge_list(2, [(0, 1)])
    for m in range(1, max_vertices):
        # m internal vertices of degree >= r force at least (r-2)m + 2 leaves
        if m + (max(r, 2) - 2) * m + 2 > max_vertices:
            break
        for skel in _prufer_trees(m):
            sdeg = [0] * m
            for a, b in skel:
                sdeg[a] += 1
                sdeg[b] += 1
            need = [max(r - d, 1 if d <= 1 else 0) for d in sdeg]
            if m == 1:
                need = [max(r, 2)]
            spare = max_vertices - m - sum(need)
            if spare < 0:
                continue
            yield from _attach_leaves(m, skel, need, spare)


def _attach_leaves(m, skel, need, spare):
    def rec(i, left, counts):
        if i == m:
            edges = list(skel)
            nxt = m
            for u, c in enumerate(counts):
                for _ in range(c):
                    edges.append((u, nxt))
                    nxt += 1
            yield from_edge_list(nxt, edges)
            return
        for extra in range(left + 1):
            yield from rec(i + 1, left - extra, counts + [need[i] + extra])

    yield from rec(0, spare, [])
