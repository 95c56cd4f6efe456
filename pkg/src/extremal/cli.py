"""Command-line entry point: ``extremal <command> ...``.

Exit codes: 0 success, 1 domain failure (a check failed, nothing found),
2 usage error (bad flags, unreadable input).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__, kernels
from .builder import BuilderParams, NoAnchorError, build_good_few, build_good_many
from .census import (
    BudgetExceeded,
    PreconditionError,
    c4_census,
    check_min_degree_hom_bound,
    check_sidorenko,
    conflict_free_cycle_search,
    count_conflicting_edge_cycles,
    count_conflicting_vertex_cycles,
    edge_fanout,
    equality_relation,
    genuine_cycle_count,
    hom_cycle_count,
    log,
    share_one_vertex_relation,
)
from .embedder import FORMAT_VERSION, Embedding, PipelineParams, _jsonable, run_pipeline
from .goodnice import (
    CollectionError,
    check_collection_wellformed,
    check_good,
    check_nice,
    collection_from_json,
    infer_s,
    prune_to_nice_detailed,
)
from .graph import (
    HOST_MODELS,
    GraphError,
    HostSpec,
    bipartition,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_json_dict,
    generate_host,
    load_graph,
    path_graph,
    save_graph,
    star_graph,
    to_edgelist_text,
    to_json_dict,
)
from .hkl import build_hkl, hkl_summary
from .oracles import OracleBudgetError, embed_bruteforce, hom_count_bruteforce, turan_exhaustive, verify_embedding
from .regularize import almost_regular_subgraph, bounded_degree_subgraph, clean_c4s


class UsageError(Exception):
    pass


class DomainFailure(Exception):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# --------------------------------------------------------------------- helpers


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _report(args, result: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "tool_version": __version__,
        "command": args.command,
        "config": _config(args),
        "backend": kernels.BACKEND,
        "result": result,
    }


def _emit(args, result: dict, dest=None) -> None:
    _write(dest if dest is not None else getattr(args, "report", None), _dumps(_report(args, result)))


def _graph(path):
    if path is None:
        raise UsageError("--graph is required")
    try:
        return load_graph(path)
    except FileNotFoundError:
        raise UsageError(f"no such graph file: {path}") from None
    except (GraphError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read graph {path}: {exc}") from None


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad JSON in {path}: {exc}") from None


def _collection(path, host):
    try:
        return collection_from_json(_read_json(path), host)
    except CollectionError as exc:
        raise UsageError(str(exc)) from None


NAMED_PATTERNS = {
    "c4": lambda: cycle_graph(4),
    "c6": lambda: cycle_graph(6),
    "k3": lambda: complete_graph(3),
    "k4": lambda: complete_graph(4),
    "k23": lambda: complete_bipartite(2, 3),
    "p3": lambda: path_graph(3),
    "star3": lambda: star_graph(3),
}


def _pattern(args):
    if getattr(args, "pattern_hkl", None):
        try:
            k, ell = (int(x) for x in args.pattern_hkl.split(","))
        except ValueError:
            raise UsageError("--pattern-hkl expects K,L") from None
        return build_hkl(k, ell).graph
    if getattr(args, "pattern_name", None):
        return NAMED_PATTERNS[args.pattern_name]()
    if getattr(args, "pattern", None):
        return _graph(args.pattern)
    raise UsageError("a pattern is required (--pattern, --pattern-name or --pattern-hkl)")


def default_seed() -> int:
    raw = os.environ.get("EXTREMAL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"EXTREMAL_SEED={raw!r} is not an integer") from None


# -------------------------------------------------------------------- commands


def cmd_gen_hkl(args):
    h = build_hkl(args.k, args.ell)
    if args.format == "json":
        text = _dumps({**to_json_dict(h.graph), "k": args.k, "ell": args.ell, "labels": h.labels_json()})
    else:
        text = to_edgelist_text(h.graph)
    _write(args.out, text)
    if args.report:
        _emit(args, hkl_summary(h))
    return 0


def cmd_gen_host(args):
    pattern = None
    if args.model == "planted-pattern-plus-noise":
        pattern = _pattern(args)
    parts = tuple(args.parts) if args.parts else None
    gen = generate_host(HostSpec(args.model, args.n, args.p, args.seed, pattern, parts))
    save_or_print = to_edgelist_text(gen.graph) if args.format == "edgelist" else _dumps(to_json_dict(gen.graph))
    _write(args.out, save_or_print)
    if args.report:
        _emit(args, {
            "n": gen.graph.n,
            "edges": gen.graph.edge_count,
            "prng": gen.prng,
            "planted_vertices": list(gen.planted_vertices) if gen.planted_vertices else None,
        })
    return 0


def _census_row(payload):
    g_dict, k, brute, budget = payload
    g = from_json_dict(g_dict)
    row = {"k": k, "hom": hom_cycle_count(g, k)}
    try:
        row["genuine_cycles"] = genuine_cycle_count(g, 2 * k, budget) if 2 * k >= 3 else None
    except BudgetExceeded:
        row["genuine_cycles"] = None
    if brute:
        row["hom_bruteforce"] = hom_count_bruteforce(g, k)
        row["agree"] = row["hom_bruteforce"] == row["hom"]
    return row


def cmd_census(args):
    g = _graph(args.graph)
    payloads = [(to_json_dict(g), k, args.brute_force, args.budget) for k in args.k]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_census_row, payloads))
    else:
        rows = [_census_row(p) for p in payloads]
    c4 = c4_census(g)
    result = {
        "n": g.n,
        "edges": g.edge_count,
        "max_degree": g.max_degree,
        "min_degree": g.min_degree,
        "c4_total": c4.total,
        "c4_max_per_edge": c4.max_per_edge,
        "cycles": rows,
    }
    if args.csv:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _write(args.csv, buf.getvalue())
    _emit(args, result)
    if args.brute_force and not all(r["agree"] for r in rows):
        raise DomainFailure("trace count disagrees with brute force")
    return 0


def cmd_clean(args):
    g = _graph(args.graph)
    res = clean_c4s(g, args.log_base)
    if args.out:
        save_graph(res.graph, args.out, args.format)
    log_text = _dumps(_report(args, {"edges_in": g.edge_count, "edges_out": res.graph.edge_count, **res.log_dict()}))
    _write(args.log, log_text)
    if not (res.certificate_ok and res.edges_ok):
        raise DomainFailure("cleaning postconditions failed")
    return 0


def cmd_regularize(args):
    g = _graph(args.graph)
    if g.edge_count == 0:
        raise DomainFailure("graph has no edges")
    if args.variant == "es":
        res = almost_regular_subgraph(g, args.alpha)
    else:
        res = bounded_degree_subgraph(g, args.alpha, args.seed, args.max_attempts)
    if args.out:
        save_graph(res.subgraph, args.out, args.format)
    _emit(args, res.to_dict())
    return 0 if res.success else 1


def _literal_branch(g, epsilon, log_base):
    q = c4_census(g).total
    n = g.n
    lg = log(n, log_base) if n > 1 else 0.0
    thr = n ** (5 / 3 + 3 * epsilon) / (96 * lg) if lg else float("inf")
    return ("few" if q <= thr else "many"), q, thr


def cmd_build_collection(args):
    g = _graph(args.graph)
    params = BuilderParams(args.epsilon, args.k, args.tau, args.budget, args.beta, None, args.log_base)
    literal, q, thr = _literal_branch(g, args.epsilon, args.log_base)
    branch = literal if args.branch == "auto" else args.branch
    try:
        res = (build_good_few if branch == "few" else build_good_many)(g, params)
    except NoAnchorError as exc:
        _emit(args, {"branch": branch, "literal_branch": literal, "q": q, "failure": str(exc)})
        raise DomainFailure(str(exc)) from None
    if args.out:
        _write(args.out, res.collection.to_json_text() + "\n")
    _emit(args, {
        "branch": branch,
        "literal_branch": literal,
        "q": q,
        "q_threshold": thr,
        "size": len(res.collection),
        "s": res.s,
        "truncated": res.collection.truncated,
        "hypotheses": res.hypotheses,
        "measurements": res.measurements,
        "certificate": res.certificate.to_dict() if res.certificate is not None else None,
        "failure": res.failure,
    })
    return 0 if res.ok else 1


def cmd_check_good(args):
    g = _graph(args.graph)
    C = _collection(args.collection, g)
    if not C.tuples:
        raise DomainFailure("empty collection")
    try:
        s = args.s if args.s is not None else infer_s(C)
        cert = check_good(C, args.beta, s)
    except CollectionError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, {"inferred_s": infer_s(C), **cert.to_dict()})
    return 0 if cert.verdict else 1


def cmd_prune_nice(args):
    g = _graph(args.graph)
    C = _collection(args.collection, g)
    try:
        if not check_collection_wellformed(C):
            raise DomainFailure("collection is not well formed")
        s = args.s if args.s is not None else (infer_s(C) if C.tuples else 1)
        res = prune_to_nice_detailed(C, args.beta, s)
    except CollectionError as exc:
        raise UsageError(str(exc)) from None
    nice = check_nice(res.collection, args.beta)
    if args.out:
        _write(args.out, res.collection.to_json_text() + "\n")
    _emit(args, {
        "size_in": len(C),
        "size_out": len(res.collection),
        "threshold": res.threshold,
        "s_effective": res.s_effective,
        "fibers_deleted": len(res.deleted_fibers),
        "niceness": nice.to_dict(),
    })
    return 0 if res.collection.tuples else 1


def cmd_pipeline(args):
    g = _graph(args.graph)
    params = PipelineParams(
        epsilon=args.epsilon,
        k=args.k,
        ell=args.ell,
        delta=args.delta,
        seed=args.seed,
        max_attempts=args.max_attempts,
        cycle_budget=args.budget,
        search_budget=args.search_budget,
        beta_override=args.beta,
        tau_override=args.tau,
        branch_override=args.branch_override,
        log_base=args.log_base,
        paper_literal=args.literal,
        timings=args.timings,
    )
    rep = run_pipeline(g, params)
    _emit(args, rep.to_dict())
    if not rep.success:
        f = rep.failure or {}
        sys.stderr.write(f"pipeline failed at stage {f.get('stage')}: {f.get('reason')}\n")
        return 1
    return 0


def _embedding_from_file(path, k, ell):
    data = _read_json(path)
    if isinstance(data, dict) and "result" in data:
        data = data["result"]
    if isinstance(data, dict) and "embedding" in data:
        data = data["embedding"]
    if not isinstance(data, dict):
        raise UsageError("embedding file must hold an {'i,j': vertex} object")
    try:
        mapping = {tuple(int(x) for x in key.split(",")): int(v) for key, v in data.items()}
    except (ValueError, AttributeError):
        raise UsageError("embedding keys must look like 'i,j'") from None
    return Embedding(k, ell, mapping)


def cmd_verify_embedding(args):
    g = _graph(args.graph)
    emb = _embedding_from_file(args.embedding, args.k, args.ell)
    h = build_hkl(args.k, args.ell)
    try:
        vmap = emb.vertex_map()
    except KeyError as exc:
        raise DomainFailure(f"label {exc} is not a vertex of the pattern") from None
    problems = verify_embedding(h.graph, g, vmap)
    _emit(args, {"valid": not problems, "problems": problems})
    return 0 if not problems else 1


def cmd_oracle(args):
    if args.oracle == "embed":
        h = _pattern(args)
        g = _graph(args.graph)
        res = embed_bruteforce(h, g, args.budget)
        _emit(args, {"status": res.status, "mapping": res.mapping, "nodes": res.nodes})
        return 0 if res.found else 1
    if args.oracle == "hom":
        g = _graph(args.graph)
        _emit(args, {"k": args.k, "hom": hom_count_bruteforce(g, args.k), "trace": hom_cycle_count(g, args.k)})
        return 0
    h = _pattern(args)
    try:
        rec = turan_exhaustive(args.n, h, args.strategy)
    except OracleBudgetError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, {"n": rec.n, "value": rec.value, "witness": to_json_dict(rec.witness), "strategy": rec.strategy})
    return 0


def cmd_check_lemmas(args):
    g = _graph(args.graph)
    out = {"sidorenko": [check_sidorenko(g, k).to_dict() for k in args.k]}
    parts = bipartition(g)
    if parts is not None and g.min_degree >= 1:
        out["homcycles"] = [check_min_degree_hom_bound(g, parts, k).to_dict() for k in args.k]
    scans = []
    for k in args.k:
        if k < 2:
            continue
        try:
            rel = share_one_vertex_relation()
            scans.append(count_conflicting_edge_cycles(g, k, rel, edge_fanout(g, rel), args.budget).to_dict())
            side = frozenset(range(g.n))
            d = g.max_degree
            scans.append(count_conflicting_vertex_cycles(g, k, side, side, equality_relation(), d, d, 1, 1,
                                                         args.budget).to_dict())
            search = conflict_free_cycle_search(g, k, equality_relation(), args.budget, args.log_base)
            scans.append({
                "name": "conflict-free-search",
                "k": k,
                "status": search.status,
                "walk": list(search.walk) if search.walk else None,
                "alpha": search.alpha,
                "alpha_threshold": search.alpha_threshold,
            })
        except (PreconditionError, BudgetExceeded) as exc:
            scans.append({"k": k, "skipped": str(exc)})
    out["conflicts"] = scans
    _emit(args, out)
    checks = out["sidorenko"] + out.get("homcycles", []) + [s for s in scans if "satisfied" in s]
    return 0 if all(c["satisfied"] for c in checks) else 1


# ---------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-base", choices=["natural", "two"], default="natural")
    common.add_argument("--jobs", type=int, default=1, help="worker processes where supported (census)")

    p = _Parser(prog="extremal", description="H_{k,l} construction, cycle census and embedding search.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    def seed_opt(sp):
        sp.add_argument("--seed", type=int, default=None, help="defaults to $EXTREMAL_SEED, else 0")

    sp = add("gen-hkl", cmd_gen_hkl, "write H_{k,l}")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--format", choices=["json", "edgelist"], default="json")
    sp.add_argument("--out")
    sp.add_argument("--report")

    sp = add("gen-host", cmd_gen_host, "generate a seeded host graph")
    sp.add_argument("--model", choices=HOST_MODELS, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, default=0.0)
    seed_opt(sp)
    sp.add_argument("--pattern")
    sp.add_argument("--pattern-hkl")
    sp.add_argument("--pattern-name", choices=sorted(NAMED_PATTERNS))
    sp.add_argument("--parts", type=int, nargs=2)
    sp.add_argument("--format", choices=["json", "edgelist"], default="edgelist")
    sp.add_argument("--out")
    sp.add_argument("--report")

    sp = add("census", cmd_census, "homomorphic and genuine cycle counts")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k", type=int, nargs="+", default=[2])
    sp.add_argument("--brute-force", action="store_true")
    sp.add_argument("--budget", type=int, default=10**7)
    sp.add_argument("--csv")
    sp.add_argument("--report")

    sp = add("clean", cmd_clean, "remove edges in too many 4-cycles")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["json", "edgelist"], default="edgelist")
    sp.add_argument("--log")

    sp = add("regularize", cmd_regularize, "almost-regular or bounded-degree subgraph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--alpha", type=float, required=True)
    seed_opt(sp)
    sp.add_argument("--variant", choices=["es", "random"], default="random")
    sp.add_argument("--max-attempts", type=int, default=20)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["json", "edgelist"], default="edgelist")
    sp.add_argument("--report")

    sp = add("build-collection", cmd_build_collection, "build a collection of 8k-cycles")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--branch", choices=["auto", "few", "many"], default="auto")
    sp.add_argument("--tau", type=int)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--budget", type=int, default=2_000_000)
    sp.add_argument("--out")
    sp.add_argument("--report")

    for name, func, help_ in (("check-good", cmd_check_good, "check the goodness conditions"),
                              ("prune-nice", cmd_prune_nice, "prune a collection to a nice one")):
        sp = add(name, func, help_)
        sp.add_argument("--graph", required=True)
        sp.add_argument("--collection", required=True)
        sp.add_argument("--beta", type=float, required=True)
        sp.add_argument("--s", type=float, help="defaults to the largest single-coordinate fiber")
        if name == "prune-nice":
            sp.add_argument("--out")
        sp.add_argument("--report")

    sp = add("pipeline", cmd_pipeline, "regularize, clean, build, prune and search for H_{k,l}")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    seed_opt(sp)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--tau", type=int)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--branch-override", choices=["few", "many"])
    sp.add_argument("--max-attempts", type=int, default=20)
    sp.add_argument("--budget", type=int, default=2_000_000)
    sp.add_argument("--search-budget", type=int, default=1_000_000)
    sp.add_argument("--literal", action="store_true", help="insist on k >= 1/eps and l >= 16k/eps")
    sp.add_argument("--timings", action="store_true", help="record elapsed_ms (reports stop being byte-stable)")
    sp.add_argument("--report")

    sp = add("verify-embedding", cmd_verify_embedding, "check an H_{k,l} embedding against a host")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--embedding", required=True)
    sp.add_argument("--report")

    sp = add("oracle", cmd_oracle, "brute-force ground truth")
    osub = sp.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    o = osub.add_parser("embed", parents=[common])
    o.add_argument("--graph", required=True)
    o.add_argument("--pattern")
    o.add_argument("--pattern-hkl")
    o.add_argument("--pattern-name", choices=sorted(NAMED_PATTERNS))
    o.add_argument("--budget", type=int, default=-1)
    o.add_argument("--report")
    o = osub.add_parser("hom", parents=[common])
    o.add_argument("--graph", required=True)
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--report")
    o = osub.add_parser("turan", parents=[common])
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--pattern")
    o.add_argument("--pattern-hkl")
    o.add_argument("--pattern-name", choices=sorted(NAMED_PATTERNS))
    o.add_argument("--strategy", choices=["descending", "ascending"], default="descending")
    o.add_argument("--report")

    sp = add("check-lemmas", cmd_check_lemmas, "evaluate the counting inequalities on a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--k", type=int, nargs="+", default=[2])
    sp.add_argument("--budget", type=int, default=10**7)
    sp.add_argument("--report")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = default_seed()
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"extremal: {exc}\n")
        return 2
    except (GraphError, ValueError) as exc:
        sys.stderr.write(f"extremal: invalid input: {exc}\n")
        return 2
    except DomainFailure as exc:
        sys.stderr.write(f"extremal: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
