"""Auxiliary-graph search for H_{k,l} copies and the end-to-end pipeline."""

from __future__ import annotations

import json
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .builder import BuilderParams, BuildResult, NoAnchorError, build_good_few, build_good_many
from .census import log
from .goodnice import CycleCollection, check_collection_wellformed, check_nice, prune_to_nice_detailed
from .graph import Graph
from .hkl import build_hkl
from .oracles import verify_embedding
from .regularize import bounded_degree_subgraph, clean_c4s, regularity_constant

FORMAT_VERSION = 1


class EmbeddingVerificationError(AssertionError):
    """A search result failed the independent edge check; indicates an indexing bug."""


# ------------------------------------------------------------------- weaving


def weave_positions(k: int) -> list[tuple[str, int]]:
    """Source of each woven coordinate as ('y' | 'z', 0-based index)."""
    fwd, back = [], []
    for b in range(k):
        fwd += [("y", 4 * b), ("y", 4 * b + 1), ("z", 4 * b + 2), ("z", 4 * b + 3)]
    for b in reversed(range(k)):
        back += [("y", 4 * b + 3), ("y", 4 * b + 2), ("z", 4 * b + 1), ("z", 4 * b)]
    return fwd + back


_POSITIONS: dict[int, list[tuple[str, int]]] = {}


def _positions(k):
    if k not in _POSITIONS:
        _POSITIONS[k] = weave_positions(k)
    return _POSITIONS[k]


def weave(y, z, k: int) -> tuple[int, ...]:
    if len(y) != 4 * k or len(z) != 4 * k:
        raise ValueError(f"weave needs two tuples of length 4k = {4 * k}")
    src = {"y": y, "z": z}
    return tuple(src[s][i] for s, i in _positions(k))


def unweave(c, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if len(c) != 8 * k:
        raise ValueError(f"unweave needs a tuple of length 8k = {8 * k}")
    y = [None] * (4 * k)
    z = [None] * (4 * k)
    for x, (s, i) in zip(c, _positions(k)):
        (y if s == "y" else z)[i] = x
    return tuple(y), tuple(z)


def aux_adjacent(y, z, C: CycleCollection) -> bool:
    return weave(y, z, C.k) in C or weave(z, y, C.k) in C


def conflict(y, z) -> bool:
    if len(y) != len(z):
        raise ValueError("aux vertices must have equal length")
    return not set(y).isdisjoint(z)


def aux_index(C: CycleCollection) -> dict[tuple, set[tuple]]:
    """Adjacency of the auxiliary graph restricted to vertices touched by C."""
    nbrs: dict[tuple, set[tuple]] = defaultdict(set)
    for c in C.tuples:
        y, z = unweave(c, C.k)
        nbrs[y].add(z)
        nbrs[z].add(y)
    return nbrs


# ----------------------------------------------------------------- embedding


@dataclass
class Embedding:
    k: int
    ell: int
    mapping: dict[tuple[int, int], int]  # (row i, column j), 1-based -> host vertex

    def to_json_dict(self) -> dict[str, int]:
        return {f"{i},{j}": v for (i, j), v in sorted(self.mapping.items())}

    def vertex_map(self) -> dict[int, int]:
        """Pattern vertex id (per build_hkl) -> host vertex."""
        h = build_hkl(self.k, self.ell)
        return {h.vertex(i, j): v for (i, j), v in self.mapping.items()}

    def problems(self, g: Graph) -> list[str]:
        h = build_hkl(self.k, self.ell)
        return verify_embedding(h.graph, g, self.vertex_map())


def embedding_from_aux_cycle(cycle, k: int, ell: int) -> Embedding:
    return Embedding(k, ell, {(i + 1, j + 1): x[i] for j, x in enumerate(cycle) for i in range(4 * k)})


@dataclass
class EmbeddingSearch:
    status: str  # 'found', 'absent', 'budget'
    embedding: Embedding | None
    aux_cycle: list[tuple] | None
    nodes: int
    aux_vertices: int
    aux_edges: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def find_pattern_embedding(g: Graph, C: CycleCollection, k: int, ell: int, budget: int = 1_000_000) -> EmbeddingSearch:
    """Backtrack for a closed walk x^1 ... x^{2l} in the auxiliary graph whose
    members are pairwise coordinate-disjoint; read off x_{i,j} = x^j_i."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if C.k != k:
        raise ValueError(f"collection has k={C.k}, search asked for k={k}")
    nbrs = aux_index(C)
    n_aux = len(nbrs)
    n_edges = sum(len(v) for v in nbrs.values()) // 2
    L = 2 * ell
    limit = budget if budget >= 0 else float("inf")
    nodes = 0
    path: list[tuple] = []
    used: set[int] = set()

    def score(z):
        return sum(1 for w in nbrs[z] if not used.isdisjoint(w))

    def rec():
        nonlocal nodes
        last = path[-1]
        cands = [z for z in nbrs[last] if used.isdisjoint(z)]
        if len(path) == L - 1:
            cands = [z for z in cands if z in nbrs[path[0]]]
        cands.sort(key=lambda z: (score(z), z))
        for z in cands:
            nodes += 1
            if nodes > limit:
                raise _OutOfBudget
            path.append(z)
            if len(path) == L:
                return True
            used.update(z)
            if rec():
                return True
            used.difference_update(z)
            path.pop()
        return False

    status = "absent"
    try:
        for x1 in sorted(nbrs):
            if len(nbrs[x1]) < 2:
                continue
            nodes += 1
            if nodes > limit:
                raise _OutOfBudget
            path[:] = [x1]
            used.clear()
            used.update(x1)
            if rec():
                status = "found"
                break
    except _OutOfBudget:
        status = "budget"
    if status != "found":
        return EmbeddingSearch(status, None, None, nodes, n_aux, n_edges)
    emb = embedding_from_aux_cycle(path, k, ell)
    bad = emb.problems(g)
    if bad:
        raise EmbeddingVerificationError("; ".join(bad[:3]))
    return EmbeddingSearch("found", emb, list(path), nodes, n_aux, n_edges)


class _OutOfBudget(Exception):
    pass


def neighbour_hit_measure(C: CycleCollection) -> dict:
    """Largest share of an auxiliary vertex's neighbours using a fixed host vertex,
    next to the 8k * beta ceiling a beta-nice collection guarantees."""
    worst = Fraction(0)
    witness = None
    for y, zs in sorted(aux_index(C).items()):
        counts: dict[int, int] = defaultdict(int)
        for z in zs:
            for u in set(z):
                counts[u] += 1
        u, c = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        frac = Fraction(c, len(zs))
        if frac > worst:
            worst, witness = frac, {"aux_vertex": list(y), "vertex": u, "degree": len(zs)}
    return {"worst": worst, "witness": witness, "factor": 8 * C.k}


# ------------------------------------------------------------------ pipeline


@dataclass
class PipelineParams:
    epsilon: float
    k: int
    ell: int
    K: float | None = None
    delta: float | None = None  # niceness exponent; default epsilon / 2
    seed: int = 0
    max_attempts: int = 20
    cycle_budget: int = 2_000_000
    search_budget: int = 1_000_000
    beta_override: float | None = None
    tau_override: int | None = None
    branch_override: str | None = None
    log_base: str = "natural"
    paper_literal: bool = False
    timings: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.ell < 2:
            raise ValueError("ell must be >= 2")
        if not 0 < self.epsilon < 1 / 6:
            raise ValueError("epsilon must lie in (0, 1/6)")
        if self.branch_override not in (None, "few", "many"):
            raise ValueError("branch override must be 'few' or 'many'")
        if self.paper_literal and (self.k < 1 / self.epsilon or self.ell < 16 * self.k / self.epsilon):
            raise ValueError("literal mode needs k >= 1/epsilon and ell >= 16k/epsilon")

    @property
    def alpha(self) -> float:
        return 1 / 3 + self.epsilon

    @property
    def resolved_delta(self) -> float:
        return self.delta if self.delta is not None else self.epsilon / 2

    @property
    def resolved_K(self) -> float:
        return self.K if self.K is not None else regularity_constant(self.alpha)


@dataclass
class StageReport:
    name: str
    hypotheses: dict = field(default_factory=dict)
    sizes: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    elapsed_ms: float | None = None


@dataclass
class PipelineReport:
    params: PipelineParams
    stages: list[StageReport]
    embedding: Embedding | None = None
    failure: dict | None = None

    @property
    def success(self) -> bool:
        return self.embedding is not None

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "params": asdict(self.params),
            "success": self.success,
            "failure": self.failure,
            "stages": [asdict(s) for s in self.stages],
            "embedding": self.embedding.to_json_dict() if self.embedding else None,
        }

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), sort_keys=True, indent=2)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if hasattr(x, "item"):
        return x.item()
    return x


def _proportion_lemma_sides(k, ell, m, delta, log_base):
    # the condition under which the auxiliary graph is guaranteed a conflict-free 2l-cycle
    lhs = 32 * k**2 * m ** (-delta)
    lg = log(m ** (4 * k), log_base) if m > 1 else 0.0
    rhs = 1 / (2**20 * ell**3 * lg**4 * (m ** (4 * k)) ** (1 / ell)) if lg else 0.0
    return {"lhs": lhs, "rhs": rhs, "holds": lhs < rhs}


def run_pipeline(g: Graph, params: PipelineParams) -> PipelineReport:
    p = params
    stages: list[StageReport] = []
    report = PipelineReport(p, stages)

    def timed(name, fn):
        t0 = time.perf_counter()
        out = fn()
        st = StageReport(name)
        if p.timings:
            st.elapsed_ms = round((time.perf_counter() - t0) * 1000, 3)
        stages.append(st)
        return out, st

    def fail(stage, reason):
        report.failure = {"stage": stage, "reason": reason}
        return report

    if g.edge_count == 0:
        stages.append(StageReport("regularize", sizes={"n": g.n, "edges": 0}))
        return fail("regularize", "host has no edges")

    reg, st = timed("regularize", lambda: bounded_degree_subgraph(g, p.alpha, p.seed, p.max_attempts))
    H = reg.subgraph
    st.hypotheses = dict(reg.flags)
    st.sizes = {"n": g.n, "edges_in": g.edge_count, "m": H.n, "edges_out": H.edge_count, "max_degree": H.max_degree}
    st.details = {"K": reg.K, "keep_probability": reg.keep_probability, "attempts": reg.attempts, "success": reg.success}
    m = H.n

    clean, st = timed("clean", lambda: clean_c4s(H, p.log_base))
    F = clean.graph
    st.hypotheses = {"edges_half": clean.edges_ok, "per_edge_certificate": clean.certificate_ok}
    st.sizes = {"edges_in": H.edge_count, "edges_out": F.edge_count, "removed": len(clean.removed), "q": clean.q_final}
    st.details = {"max_c4_per_edge": clean.max_edge_final, "certificate_bound": clean.certificate_bound}

    q = clean.q_final
    lg = log(m, p.log_base) if m > 1 else 0.0
    threshold = m ** (5 / 3 + 3 * p.epsilon) / (96 * lg) if lg else float("inf")
    literal = "few" if q <= threshold else "many"
    branch = p.branch_override or literal
    stages.append(StageReport("branch", details={"q": q, "threshold": threshold, "literal": literal, "used": branch}))

    bp = BuilderParams(
        epsilon=p.epsilon,
        k=p.k,
        tau=p.tau_override,
        cycle_budget=p.cycle_budget,
        beta_target=p.beta_override,
        K=p.resolved_K,
        log_base=p.log_base,
    )
    builder = build_good_few if branch == "few" else build_good_many
    try:
        built, st = timed("build", lambda: builder(F, bp))
    except NoAnchorError as exc:
        stages.append(StageReport("build", details={"branch": branch, "q": q}))
        return fail("build", str(exc))
    assert isinstance(built, BuildResult)
    st.hypotheses = dict(built.hypotheses)
    st.sizes = {"collection": len(built.collection), "q": q}
    st.details = {
        "branch": branch,
        "s": built.s,
        "truncated": built.collection.truncated,
        "certificate": built.certificate.to_dict() if built.certificate is not None else None,
        "measurements": {k: v for k, v in built.measurements.items() if k not in ("n",)},
    }
    if built.certificate is not None:
        st.details["certificate"].pop("witnesses", None)
    if not built.ok:
        return fail("build", built.failure or "empty collection")

    beta = p.beta_override if p.beta_override is not None else m ** (-p.resolved_delta)
    pruned, st = timed("prune", lambda: prune_to_nice_detailed(built.collection, beta, built.s))
    nice = check_nice(pruned.collection, beta)
    st.hypotheses = {"nice": nice.verdict, "wellformed": bool(check_collection_wellformed(pruned.collection))}
    st.sizes = {"collection_in": len(built.collection), "collection_out": len(pruned.collection)}
    st.details = {
        "beta": beta,
        "threshold": pruned.threshold,
        "s_effective": pruned.s_effective,
        "fibers_deleted": len(pruned.deleted_fibers),
        "worst_proportion": float(nice.worst_proportion),
    }
    if not pruned.collection.tuples:
        return fail("prune", "every fiber was pruned away")

    search, st = timed("embed", lambda: find_pattern_embedding(F, pruned.collection, p.k, p.ell, p.search_budget))
    hits = neighbour_hit_measure(pruned.collection)
    sides = _proportion_lemma_sides(p.k, p.ell, m, p.resolved_delta, p.log_base)
    st.hypotheses = {
        "proportion_lemma": sides["holds"],
        "neighbour_claim": hits["worst"] <= hits["factor"] * Fraction(beta),
    }
    st.sizes = {"aux_vertices": search.aux_vertices, "aux_edges": search.aux_edges, "nodes": search.nodes}
    st.details = {
        "status": search.status,
        "worst_neighbour_share": float(hits["worst"]),
        "proportion_lemma_lhs": sides["lhs"],
        "proportion_lemma_rhs": sides["rhs"],
    }
    if not search.found:
        return fail("embed", "search budget exhausted" if search.status == "budget" else "no conflict-free aux cycle")

    lifted = Embedding(p.k, p.ell, {ij: reg.vertex_map[v] for ij, v in search.embedding.mapping.items()})
    bad = lifted.problems(g)
    if bad:
        raise EmbeddingVerificationError("; ".join(bad[:3]))
    report.embedding = lifted
    stages.append(StageReport("verify", hypotheses={"edges_preserved": True, "injective": True},
                              sizes={"pattern_vertices": 8 * p.k * p.ell}))
    return report

