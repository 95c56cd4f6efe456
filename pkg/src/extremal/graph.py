"""Simple undirected graphs on dense integer ids, plus host generators and I/O.

Random generation uses numpy's ``PCG64`` bit generator (``numpy.random.Generator``)
seeded with the given 64-bit integer. Erdős–Rényi edges are decided by drawing
one uniform double per unordered pair ``(u, v)``, ``u < v``, in lexicographic
order and keeping the pair when the draw is ``< p``. The planted model first
draws a permutation of ``range(n)`` to place the pattern, then runs the same
Erdős–Rényi pass over all pairs with the same generator.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

PRNG_NAME = "numpy-PCG64-v1"

HOST_MODELS = ("erdos-renyi", "planted-pattern-plus-noise", "complete", "complete-bipartite", "cycle")


class GraphError(ValueError):
    """Malformed graph input (bad vertex id, loop, bad file)."""


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, e={self.edge_count})"

    @cached_property
    def nbr_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adj)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adj)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def min_degree(self) -> int:
        return min(self.degrees, default=0)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.nbr_sets[u]

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise GraphError(f"vertex {v!r} out of range for n={self.n}")

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) as int64 arrays, neighbours ascending."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adj])
        indices = np.fromiter((w for a in self.adj for w in a), dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    @cached_property
    def codegree_matrix(self) -> np.ndarray:
        a = self.adjacency_matrix()
        return a @ a

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph renumbered 0..m-1; returns (graph, old ids in new order)."""
        keep = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return from_edge_list(len(keep), edges), keep

    def spanning_subgraph(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        return from_edge_list(self.n, edges)

    def without_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise GraphError(f"({u}, {v}) is not an edge")
        e = (min(u, v), max(u, v))
        return from_edge_list(self.n, [f for f in self.edges if f != e])


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph on ``range(n)``; duplicate edges collapse, loops are rejected."""
    if n < 0:
        raise GraphError("negative vertex count")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = [(u + g.n, v + g.n) for u, v in h.edges]
    return from_edge_list(g.n + h.n, list(g.edges) + shifted)


def codegree(g: Graph, u: int, v: int) -> int:
    """|N(u) ∩ N(v)|; for u == v this is the degree."""
    g._check_vertex(u)
    g._check_vertex(v)
    a, b = g.adj[u], g.adj[v]
    i = j = c = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            c += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return c


def bipartition(g: Graph) -> tuple[frozenset[int], frozenset[int]] | None:
    """Proper 2-colouring by BFS from the lowest id of each component, or None."""
    colour = _bfs_colouring(g)
    if colour is None:
        return None
    return (frozenset(v for v in range(g.n) if colour[v] == 0),
            frozenset(v for v in range(g.n) if colour[v] == 1))


def _bfs_colouring(g: Graph) -> list[int] | None:
    colour = [-1] * g.n
    for root in range(g.n):
        if colour[root] != -1:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if colour[w] == -1:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return None
    return colour


def odd_closed_walk(g: Graph) -> list[int] | None:
    """An odd closed walk (as a vertex sequence, first vertex not repeated) or None if bipartite."""
    parent = [-1] * g.n
    depth = [-1] * g.n
    for root in range(g.n):
        if depth[root] != -1:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if depth[w] == -1:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif depth[w] == depth[u]:
                    # both BFS paths back to their common ancestor plus the edge uw
                    pu, pw = [u], [w]
                    while pu[-1] != pw[-1]:
                        pu.append(parent[pu[-1]])
                        pw.append(parent[pw[-1]])
                    return pu + pw[-2::-1]
    return None


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


# ---------------------------------------------------------------- generators

def complete_graph(n: int) -> Graph:
    return from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return from_edge_list(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@dataclass(frozen=True)
class HostSpec:
    model: str
    n: int
    p: float = 0.0
    seed: int = 0
    pattern: Graph | None = None
    parts: tuple[int, int] | None = None  # complete-bipartite side sizes; default (n//2, n-n//2)

    def __post_init__(self):
        if self.model not in HOST_MODELS:
            raise GraphError(f"unknown host model {self.model!r}")
        if not 0.0 <= self.p <= 1.0:
            raise GraphError(f"p={self.p} outside [0, 1]")
        if self.n < 0:
            raise GraphError("negative n")


@dataclass(frozen=True)
class GeneratedHost:
    graph: Graph
    spec: HostSpec
    planted_vertices: tuple[int, ...] | None = None  # pattern vertex i -> host id
    prng: str = field(default=PRNG_NAME)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))


def _er_edges(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return []
    draws = rng.random(len(pairs))
    return [pr for pr, x in zip(pairs, draws) if x < p]


def generate_host(spec: HostSpec) -> GeneratedHost:
    n = spec.n
    if spec.model == "complete":
        return GeneratedHost(complete_graph(n), spec)
    if spec.model == "cycle":
        return GeneratedHost(cycle_graph(n), spec)
    if spec.model == "complete-bipartite":
        a, b = spec.parts or (n // 2, n - n // 2)
        if a + b != n:
            raise GraphError("bipartite side sizes must sum to n")
        return GeneratedHost(complete_bipartite(a, b), spec)
    rng = _rng(spec.seed)
    if spec.model == "erdos-renyi":
        return GeneratedHost(from_edge_list(n, _er_edges(n, spec.p, rng)), spec)
    pattern = spec.pattern
    if pattern is None:
        raise GraphError("planted model needs a pattern graph")
    if pattern.n > n:
        raise GraphError(f"pattern has {pattern.n} vertices but host has n={n}")
    place = [int(x) for x in rng.permutation(n)[: pattern.n]]
    edges = [(place[u], place[v]) for u, v in pattern.edges]
    edges += _er_edges(n, spec.p, rng)
    return GeneratedHost(from_edge_list(n, edges), spec, tuple(place))


# ---------------------------------------------------------------------- I/O

def to_edgelist_text(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def from_edgelist_text(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge-list header must be 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return from_edge_list(n, edges)


def to_json_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges]}


def from_json_dict(d: dict) -> Graph:
    try:
        return from_edge_list(int(d["n"]), d["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed JSON graph: {exc}") from None


def to_json_text(g: Graph) -> str:
    return json.dumps(to_json_dict(g), separators=(",", ":")) + "\n"


def load_graph(path) -> Graph:
    """Read a graph from an edge-list or JSON file (sniffed by first character)."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            return from_json_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise GraphError(f"bad JSON graph: {exc}") from None
    return from_edgelist_text(text)


def save_graph(g: Graph, path, fmt: str = "edgelist") -> None:
    with open(path, "w") as fh:
        fh.write(to_json_text(g) if fmt == "json" else to_edgelist_text(g))
