"""Collections of labelled 8k-cycles: goodness and niceness checkers, and pruning.

Positions are 0-based. Dropping the pair at position ``p`` removes coordinates
``p`` and ``(p + 1) % 8k``; a single-coordinate fiber drops only ``p``.
"""

from __future__ import annotations

import heapq
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph


class CollectionError(ValueError):
    pass


@dataclass(frozen=True)
class CycleCollection:
    k: int
    tuples: tuple[tuple[int, ...], ...]
    host: Graph | None = None
    truncated: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise CollectionError("k must be >= 1")
        object.__setattr__(self, "tuples", tuple(sorted(set(tuple(t) for t in self.tuples))))

    @property
    def length(self) -> int:
        return 8 * self.k

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, t) -> bool:
        return tuple(t) in self._members

    @property
    def _members(self) -> frozenset:
        cached = self.__dict__.get("_member_cache")
        if cached is None:
            cached = frozenset(self.tuples)
            object.__setattr__(self, "_member_cache", cached)
        return cached

    def subset(self, tuples) -> "CycleCollection":
        return CycleCollection(self.k, tuple(tuples), self.host, self.truncated)

    def to_json_dict(self) -> dict:
        return {"k": self.k, "tuples": [list(t) for t in self.tuples]}

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


def collection_from_json(data: dict | str, host: Graph | None = None) -> CycleCollection:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        k = int(data["k"])
        tuples = [tuple(int(x) for x in t) for t in data["tuples"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CollectionError(f"malformed collection: {exc}") from None
    return CycleCollection(k, tuple(tuples), host)


def _plain(x):
    # numpy scalars would leak into JSON reports
    return x.item() if hasattr(x, "item") else x


def _projection(t, drop):
    return tuple(x for i, x in enumerate(t) if i not in drop)


def _pair(p, L):
    return (p, (p + 1) % L)


# ------------------------------------------------------------ well-formedness


@dataclass
class WellFormedness:
    ok: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_collection_wellformed(C: CycleCollection, host: Graph | None = None) -> WellFormedness:
    """Every tuple has 8k distinct entries and is closed under host adjacency."""
    g = host if host is not None else C.host
    L = C.length
    for t in C.tuples:
        if len(t) != L:
            raise CollectionError(f"tuple of length {len(t)} in a collection with 8k = {L}")
    for t in C.tuples:
        if len(set(t)) != L:
            dup = next(x for x, c in Counter(t).items() if c > 1)
            return WellFormedness(False, {"tuple": list(t), "reason": "repeated vertex", "vertex": dup})
        if g is None:
            continue
        for i in range(L):
            a, b = t[i], t[(i + 1) % L]
            if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
                return WellFormedness(False, {"tuple": list(t), "reason": "non-edge", "pair": [a, b], "position": i})
    return WellFormedness(True)


# ----------------------------------------------------------------- goodness


def single_fibers(C: CycleCollection, p: int) -> dict[tuple, list[tuple]]:
    out: dict[tuple, list[tuple]] = defaultdict(list)
    for t in C.tuples:
        out[_projection(t, (p,))].append(t)
    return out


def pair_fibers(C: CycleCollection, p: int) -> dict[tuple, list[tuple]]:
    out: dict[tuple, list[tuple]] = defaultdict(list)
    drop = _pair(p, C.length)
    for t in C.tuples:
        out[_projection(t, drop)].append(t)
    return out


def infer_s(C: CycleCollection) -> int:
    """Largest single-coordinate fiber, i.e. the least admissible s."""
    if not C.tuples:
        raise CollectionError("empty collection has no fibers")
    return max(len(f) for p in range(C.length) for f in single_fibers(C, p).values())


@dataclass
class GoodnessCertificate:
    beta: float
    s: float
    size: int
    wellformed: bool
    fibers_ok: bool
    projections_ok: bool
    cap: float  # beta |C| / (16 k s)
    max_single_fiber: int
    max_projections: int
    witnesses: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return self.wellformed and self.fibers_ok and self.projections_ok

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "s": self.s,
            "size": self.size,
            "verdict": self.verdict,
            "bullets": {"wellformed": self.wellformed, "fibers": self.fibers_ok, "projections": self.projections_ok},
            "cap": self.cap,
            "max_single_fiber": self.max_single_fiber,
            "max_projections": self.max_projections,
            "witnesses": self.witnesses,
        }


def check_good(C: CycleCollection, beta: float, s: float, host: Graph | None = None) -> GoodnessCertificate:
    if beta <= 0 or s <= 0:
        raise CollectionError("beta and s must be positive")
    beta, s = _plain(beta), _plain(s)
    wf = check_collection_wellformed(C, host)
    witnesses = {}
    if not wf:
        witnesses["wellformed"] = wf.witness
    L = C.length
    max_single = 0
    for p in range(L):
        for proj, fib in single_fibers(C, p).items():
            if len(fib) > max_single:
                max_single = len(fib)
            if len(fib) > s and "fibers" not in witnesses:
                witnesses["fibers"] = {"position": p, "tuple": list(fib[0]), "fiber": [list(t) for t in fib]}
    cap = beta * len(C) / (16 * C.k * s)
    max_proj = 0
    for p in range(L):
        projs = pair_fibers(C, p)
        max_proj = max(max_proj, len(projs))
        if len(projs) > cap and "projections" not in witnesses:
            witnesses["projections"] = {
                "position": p,
                "count": len(projs),
                "projections": [list(x) for x in sorted(projs)[:20]],
            }
    return GoodnessCertificate(
        beta, s, len(C), bool(wf), bool(max_single <= s), bool(max_proj <= cap), cap, max_single, max_proj, witnesses
    )


# ------------------------------------------------------------------ niceness


@dataclass
class NicenessReport:
    beta: float
    worst_proportion: Fraction
    witness: dict | None

    @property
    def verdict(self) -> bool:
        return self.worst_proportion <= Fraction(self.beta)

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "verdict": self.verdict,
            "worst_proportion": str(self.worst_proportion),
            "worst_proportion_float": float(self.worst_proportion),
            "witness": self.witness,
        }


def fiber_hit_proportion(fiber, p: int, L: int) -> tuple[Fraction, int | None]:
    """Largest share of the fiber having vertex u at position p or p+1."""
    q = (p + 1) % L
    hits: Counter = Counter()
    for t in fiber:
        hits[t[p]] += 1
        if t[q] != t[p]:
            hits[t[q]] += 1
    if not hits:
        return Fraction(0), None
    u, c = min(hits.items(), key=lambda kv: (-kv[1], kv[0]))
    return Fraction(c, len(fiber)), u


def check_nice(C: CycleCollection, beta: float) -> NicenessReport:
    worst = Fraction(0)
    witness = None
    for p in range(C.length):
        for proj, fib in sorted(pair_fibers(C, p).items()):
            prop, u = fiber_hit_proportion(fib, p, C.length)
            if prop > worst:
                worst = prop
                witness = {"position": p, "projection": list(proj), "vertex": u, "fiber_size": len(fib)}
    return NicenessReport(beta, worst, witness)


# ------------------------------------------------------------------- pruning


@dataclass
class PruneResult:
    collection: CycleCollection
    threshold: float
    s_effective: float
    deleted_fibers: list[dict]

    @property
    def removed(self) -> int:
        return sum(d["size"] for d in self.deleted_fibers)


def prune_to_nice_detailed(C: CycleCollection, beta: float, s: float) -> PruneResult:
    """Delete pair-fibers smaller than 2s/beta until none is left.

    For beta < 1 the scale is raised to infer_s(C) when s is below it, since
    otherwise the survivors would not be guaranteed nice (for beta >= 1 every
    collection is nice). Smallest position first, then the lexicographically
    least projection.
    """
    if beta <= 0 or s <= 0:
        raise CollectionError("beta and s must be positive")
    if not C.tuples:
        return PruneResult(C, 2 * s / beta, s, [])
    s_eff = max(s, infer_s(C)) if beta < 1 else s
    thr = 2 * s_eff / beta
    L = C.length
    drops = [_pair(p, L) for p in range(L)]
    keys = [[_projection(t, d) for d in drops] for t in C.tuples]
    index: list[dict[tuple, set[int]]] = [defaultdict(set) for _ in range(L)]
    for tid, ks in enumerate(keys):
        for p in range(L):
            index[p][ks[p]].add(tid)
    heap = [(p, proj) for p in range(L) for proj, members in index[p].items() if len(members) < thr]
    heapq.heapify(heap)
    alive = set(range(len(C.tuples)))
    log = []
    while heap:
        p, proj = heapq.heappop(heap)
        members = index[p].get(proj)
        if not members:
            continue
        log.append({"position": p, "projection": list(proj), "size": len(members)})
        for tid in sorted(members):
            alive.discard(tid)
            for q in range(L):
                bucket = index[q][keys[tid][q]]
                bucket.discard(tid)
                if q != p and bucket and len(bucket) < thr:
                    heapq.heappush(heap, (q, keys[tid][q]))
        index[p].pop(proj, None)
    out = C.subset(C.tuples[i] for i in sorted(alive))
    return PruneResult(out, thr, s_eff, log)


def prune_to_nice(C: CycleCollection, beta: float, s: float) -> CycleCollection:
    return prune_to_nice_detailed(C, beta, s).collection
