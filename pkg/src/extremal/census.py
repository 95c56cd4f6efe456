"""Homomorphic and genuine cycle counts, C4 statistics and the counting-lemma checkers.

Homomorphic 2k-cycles (closed walks) and genuine copies of C_{2k} (distinct
vertices) are different quantities; every function name says which one it counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import kernels
from .graph import Graph, GraphError

DEFAULT_BUDGET = 10**7


class PreconditionError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(RuntimeError):
    pass


def log(x: float, base: str = "natural") -> float:
    """Logarithm used in the lemma thresholds; ``base`` is 'natural' or 'two'."""
    if base == "natural":
        return math.log(x)
    if base == "two":
        return math.log2(x)
    raise ValueError(f"unknown log base {base!r}")


# ------------------------------------------------------------------ reports


@dataclass
class BoundReport:
    name: str
    measured: int
    bound: float
    satisfied: bool
    direction: str = "upper"  # 'upper': measured <= bound, 'lower': measured >= bound
    parameters: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "direction": self.direction,
            "satisfied": self.satisfied,
            "parameters": self.parameters,
            **({"extra": self.extra} if self.extra else {}),
        }


# -------------------------------------------------------- homomorphic counts


def _matrix_power(a: np.ndarray, e: int) -> np.ndarray:
    result = np.identity(a.shape[0], dtype=a.dtype)
    base = a
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def hom_cycle_count(g: Graph, k: int) -> int:
    """hom(C_{2k}, G) as trace(A^{2k}) = ||A^k||_F^2, exact.

    int64 arithmetic is used only when n * Δ^{2k} fits comfortably; otherwise
    the matrices hold Python integers.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if g.edge_count == 0:
        return 0
    a = g.adjacency_matrix()
    if g.n * g.max_degree ** (2 * k) >= 2**62:
        a = a.astype(object)
    half = _matrix_power(a, k)
    return int(sum(int(x) * int(x) for x in half.ravel())) if half.dtype == object else int((half * half).sum())


# ---------------------------------------------------------------- C4 census


@dataclass
class C4Census:
    total: int
    per_edge: dict[tuple[int, int], int]

    @property
    def max_per_edge(self) -> int:
        return max(self.per_edge.values(), default=0)


def c4_per_edge_counts(g: Graph) -> dict[tuple[int, int], int]:
    """For each edge uv: sum over w in N(u)-{v} of (d(v,w) - 1)."""
    if g.edge_count == 0:
        return {}
    a = g.adjacency_matrix()
    cod = a @ a
    # row u of a @ (cod - 1) restricted to nbrs: sum_{w in N(u)} (cod[w, v] - 1)
    s = a @ (cod - 1)
    deg = np.diag(cod)
    return {(u, v): int(s[u, v] - (deg[v] - 1)) for u, v in g.edges}


def c4_census(g: Graph) -> C4Census:
    cod = g.codegree_matrix
    iu = np.triu_indices(g.n, 1)
    c = cod[iu]
    # each 4-cycle has two diagonals, so pairs of common neighbours count it twice
    total = int((c * (c - 1) // 2).sum()) // 2 if g.n > 1 else 0
    return C4Census(total, c4_per_edge_counts(g))


# --------------------------------------------------------------- relations


@dataclass(frozen=True)
class ConflictRelation:
    """Symmetric relation over vertices ('vertex') or over edges ('edge').

    Edge predicates receive edges as ``(u, v)`` with ``u < v``.
    """

    kind: str
    predicate: Callable
    name: str = "custom"

    def __post_init__(self):
        if self.kind not in ("vertex", "edge"):
            raise ValueError("kind must be 'vertex' or 'edge'")

    def vertex_matrix(self, g: Graph) -> np.ndarray:
        m = np.zeros((g.n, g.n), dtype=np.uint8)
        for u in range(g.n):
            for w in range(g.n):
                if self.predicate(u, w):
                    m[u, w] = 1
        return m

    def edge_matrix(self, g: Graph) -> tuple[np.ndarray, np.ndarray]:
        """(relation matrix over edge ids, n x n edge-id lookup with -1 for non-edges)."""
        edges = g.edges
        eid = np.full((g.n, g.n), -1, dtype=np.int64)
        for i, (u, v) in enumerate(edges):
            eid[u, v] = eid[v, u] = i
        m = np.zeros((len(edges), len(edges)), dtype=np.uint8)
        for i, e in enumerate(edges):
            for j, f in enumerate(edges):
                if self.predicate(e, f):
                    m[i, j] = 1
        return m, eid

    def asymmetric_pair(self, g: Graph, samples: int | None = None):
        """A pair violating symmetry, or None (exhaustive unless ``samples`` is given)."""
        items = list(range(g.n)) if self.kind == "vertex" else list(g.edges)
        pairs = [(a, b) for a in items for b in items]
        if samples is not None and samples < len(pairs):
            rng = np.random.Generator(np.random.PCG64(0))
            pairs = [pairs[i] for i in rng.choice(len(pairs), samples, replace=False)]
        for a, b in pairs:
            if bool(self.predicate(a, b)) != bool(self.predicate(b, a)):
                return a, b
        return None


def equality_relation() -> ConflictRelation:
    return ConflictRelation("vertex", lambda u, w: u == w, "equality")


def never_relation(kind: str = "vertex") -> ConflictRelation:
    return ConflictRelation(kind, lambda a, b: False, "never")


def share_one_vertex_relation() -> ConflictRelation:
    return ConflictRelation("edge", lambda e, f: len(set(e) & set(f)) == 1, "share-one-vertex")


def codegree_edge_relation(g: Graph, threshold: float) -> ConflictRelation:
    """e ≈ f: the edges share exactly one vertex and their other endpoints have codegree > threshold."""
    cod = g.codegree_matrix

    def pred(e, f):
        common = set(e) & set(f)
        if len(common) != 1:
            return False
        (a,) = set(e) - common
        (b,) = set(f) - common
        return cod[a, b] > threshold

    return ConflictRelation("edge", pred, f"codegree>{threshold}")


def edge_fanout_violation(g: Graph, rel: ConflictRelation, s: float):
    """(uv, w) where w has more than s neighbours z with uv ~ wz, or None."""
    m, eid = rel.edge_matrix(g)
    for i, uv in enumerate(g.edges):
        for w in range(g.n):
            cnt = sum(1 for z in g.adj[w] if m[i, eid[w, z]])
            if cnt > s:
                return uv, w
    return None


def edge_fanout(g: Graph, rel: ConflictRelation) -> int:
    """Least s satisfying the edge-relation fan-out condition."""
    m, eid = rel.edge_matrix(g)
    best = 0
    for i in range(len(g.edges)):
        for w in range(g.n):
            best = max(best, sum(1 for z in g.adj[w] if m[i, eid[w, z]]))
    return best


def vertex_fanout_violation(g, rel, x1, x2, d1, d2, s1, s2):
    """First (u, v, reason) breaking the two bulleted fan-out conditions, or None."""
    rm = rel.vertex_matrix(g)
    for side, other, cap_d, cap_s in ((x1, x2, d1, s1), (x2, x1, d2, s2)):
        for v in sorted(side):
            nb = [w for w in g.adj[v] if w in other]
            if len(nb) > cap_d:
                return None, v, f"{len(nb)} neighbours across > {cap_d}"
            for u in range(g.n):
                cnt = sum(1 for w in nb if rm[u, w])
                if cnt > cap_s:
                    return u, v, f"{cnt} related neighbours > {cap_s}"
    return None


# ------------------------------------------------------------- lemma checks


def check_sidorenko(g: Graph, k: int) -> BoundReport:
    if g.n < 1:
        raise GraphError("need at least one vertex")
    hom = hom_cycle_count(g, k)
    exact = Fraction(2 * g.edge_count, g.n) ** (2 * k)
    return BoundReport(
        "sidorenko",
        hom,
        float(exact),
        hom >= exact,
        "lower",
        {"k": k, "n": g.n, "e": g.edge_count},
    )


def check_min_degree_hom_bound(g: Graph, parts, k: int) -> BoundReport:
    """hom(C_{2k}, G) >= s^k t^k for a bipartite G with side minimum degrees s, t.

    Every closed walk in a bipartite graph alternates between the parts, so the
    alternating count equals hom(C_{2k}, G).
    """
    xs, ys = (frozenset(p) for p in parts)
    if xs & ys or (xs | ys) != frozenset(range(g.n)):
        raise GraphError("parts must partition the vertex set")
    for u, v in g.edges:
        if (u in xs) == (v in xs):
            raise GraphError(f"edge ({u}, {v}) does not cross the parts")
    if not xs or not ys:
        raise GraphError("both parts must be non-empty")
    s = min(g.degrees[v] for v in xs)
    t = min(g.degrees[v] for v in ys)
    if s < 1 or t < 1:
        raise GraphError("minimum side degrees must be at least 1")
    hom = hom_cycle_count(g, k)
    bound = (s * t) ** k
    return BoundReport("homcycles", hom, float(bound), hom >= bound, "lower", {"k": k, "s": s, "t": t})


def _conflict_bound(k, fan, n, hom):
    return 32 * k**1.5 * math.sqrt(fan) * n ** (1 / (2 * k)) * hom ** (1 - 1 / (2 * k))


def count_conflicting_edge_cycles(g: Graph, k: int, rel: ConflictRelation, s: float,
                                  budget: int = -1) -> BoundReport:
    if k < 2:
        raise ValueError("k must be >= 2")
    if rel.kind != "edge":
        raise ValueError("need an edge relation")
    bad = edge_fanout_violation(g, rel, s)
    if bad is not None:
        raise PreconditionError(f"fan-out exceeds s={s} at uv={bad[0]}, w={bad[1]}", bad)
    hom = hom_cycle_count(g, k)
    if g.edge_count == 0:
        measured, total = 0, 0
    else:
        m, eid = rel.edge_matrix(g)
        ip, ix = g.csr
        total, measured, _, complete = kernels.count_closed_walks(ip, ix, 2 * k, None, m, eid, None, None, budget)
        if not complete:
            raise BudgetExceeded("tuple scan exceeded its budget")
    bound = _conflict_bound(k, s * g.max_degree, g.n, hom)
    return BoundReport(
        "simple-with-edges",
        measured,
        bound,
        measured <= bound,
        "upper",
        {"k": k, "s": s, "Delta": g.max_degree, "n": g.n, "hom": hom, "relation": rel.name},
        {"walks_scanned": total},
    )


def count_conflicting_vertex_cycles(g: Graph, k: int, x1, x2, rel: ConflictRelation,
                                    delta1: float, delta2: float, s1: float, s2: float,
                                    budget: int = -1) -> BoundReport:
    if k < 2:
        raise ValueError("k must be >= 2")
    if rel.kind != "vertex":
        raise ValueError("need a vertex relation")
    x1, x2 = frozenset(x1), frozenset(x2)
    bad = vertex_fanout_violation(g, rel, x1, x2, delta1, delta2, s1, s2)
    if bad is not None:
        raise PreconditionError(f"fan-out condition fails: u={bad[0]}, v={bad[1]}: {bad[2]}", bad)
    hom = hom_cycle_count(g, k)
    big_m = max(delta1 * s2, delta2 * s1)
    in1 = np.array([v in x1 for v in range(g.n)], dtype=np.uint8)
    in2 = np.array([v in x2 for v in range(g.n)], dtype=np.uint8)
    ip, ix = g.csr
    total, measured, _, complete = kernels.count_closed_walks(
        ip, ix, 2 * k, rel.vertex_matrix(g), None, None, in1, in2, budget
    )
    if not complete:
        raise BudgetExceeded("tuple scan exceeded its budget")
    bound = _conflict_bound(k, big_m, g.n, hom)
    return BoundReport(
        "bipartite-with-vertices",
        measured,
        bound,
        measured <= bound,
        "upper",
        {"k": k, "M": big_m, "Delta1": delta1, "Delta2": delta2, "s1": s1, "s2": s2,
         "n": g.n, "hom": hom, "relation": rel.name},
        {"alternating_walks": total},
    )


# ------------------------------------------------------- constructive search


@dataclass
class CycleSearchResult:
    walk: tuple[int, ...] | None
    status: str  # 'found', 'absent' (search exhausted), 'budget'
    nodes: int
    alpha: float  # max over u, v of #{w in N(v): u ~ w} / d(v)
    alpha_threshold: float  # (2^20 k^3 (log n)^4 n^{1/k})^{-1}

    @property
    def alpha_hypothesis(self) -> bool:
        return self.alpha < self.alpha_threshold


def neighbour_proportion(g: Graph, rel: ConflictRelation) -> float:
    rm = rel.vertex_matrix(g)
    best = 0.0
    for v in range(g.n):
        d = len(g.adj[v])
        if d == 0:
            continue
        nb = list(g.adj[v])
        row_counts = rm[:, nb].sum(axis=1)
        best = max(best, float(row_counts.max()) / d)
    return best


def is_homomorphic_cycle(g: Graph, walk) -> bool:
    L = len(walk)
    return L >= 2 and all(g.has_edge(walk[i], walk[(i + 1) % L]) for i in range(L))


def conflict_free_cycle_search(g: Graph, k: int, rel: ConflictRelation,
                               budget: int = DEFAULT_BUDGET, log_base: str = "natural") -> CycleSearchResult:
    """Depth-first search for a homomorphic 2k-cycle with no related pair of positions.

    Start vertices and neighbour lists are ordered by ascending degree (ties by id).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if rel.kind != "vertex":
        raise ValueError("need a vertex relation")
    order = sorted(range(g.n), key=lambda v: (g.degrees[v], v))
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    nbrs = []
    for v in range(g.n):
        nb = sorted(g.adj[v], key=lambda w: (g.degrees[w], w))
        nbrs.extend(nb)
        indptr[v + 1] = indptr[v] + len(nb)
    indices = np.array(nbrs, dtype=np.int64)
    rm = rel.vertex_matrix(g)
    walk, nodes, complete = kernels.find_conflict_free_walk(
        indptr, indices, 2 * k, rm, np.array(order, dtype=np.int64), budget
    )
    n = max(g.n, 2)
    thr = 1.0 / (2**20 * k**3 * log(n, log_base) ** 4 * n ** (1 / k))
    alpha = neighbour_proportion(g, rel)
    if walk is not None:
        walk = tuple(int(x) for x in walk)
        if not is_homomorphic_cycle(g, walk) or any(
            rm[walk[i], walk[j]] for i in range(len(walk)) for j in range(len(walk)) if i != j
        ):
            raise AssertionError(f"search returned an invalid walk {walk}")
        return CycleSearchResult(walk, "found", nodes, alpha, thr)
    return CycleSearchResult(None, "absent" if complete else "budget", nodes, alpha, thr)


# ------------------------------------------------------------ genuine cycles


def labelled_cycles(g: Graph, length: int, budget: int = -1, allowed=None) -> list[tuple[int, ...]]:
    """All labelled genuine cycles of the given length; raises BudgetExceeded when truncated."""
    ip, ix = g.csr
    cycles, _, complete = kernels.enumerate_cycles(ip, ix, length, allowed, budget)
    if not complete:
        raise BudgetExceeded(f"cycle enumeration exceeded {budget} nodes")
    return [tuple(int(x) for x in c) for c in cycles]


def genuine_cycle_count(g: Graph, length: int, budget: int = -1) -> int:
    """Number of (unlabelled) copies of C_length."""
    return len(labelled_cycles(g, length, budget)) // (2 * length)


@dataclass(frozen=True)
class SupersatParams:
    C: float
    c: float

    def __post_init__(self):
        if not (self.C > 0 and self.c > 0):
            raise ValueError("supersaturation constants must be positive")


def supersaturation_report(g: Graph, k: int, params: SupersatParams, budget: int = DEFAULT_BUDGET) -> BoundReport:
    """Copies of C_{2k} against c e^{2k}/n^{2k}; the constants are user-supplied, so nothing is asserted."""
    if k < 2:
        raise ValueError("k must be >= 2")
    n, e = g.n, g.edge_count
    copies = genuine_cycle_count(g, 2 * k, budget) if e else 0
    bound = params.c * (e / n) ** (2 * k) if n else 0.0
    hyp = e >= params.C * n ** (1 + 1 / k) if n else False
    return BoundReport(
        "supersaturation",
        copies,
        bound,
        copies >= bound,
        "lower",
        {"k": k, "n": n, "e": e, "C": params.C, "c": params.c},
        {"hypothesis_edges": hyp, "ratio": (copies * n ** (2 * k) / e ** (2 * k)) if e else None},
    )
