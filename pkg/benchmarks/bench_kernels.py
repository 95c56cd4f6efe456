"""Time the compiled and pure-Python enumeration kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each row also checks that both backends return identical results.
"""

import argparse
import json
import statistics
import sys
import time

import numpy as np

from extremal import kernels
from extremal.graph import complete_bipartite, from_edge_list
from extremal.hkl import build_hkl


def _random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    return from_edge_list(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def _cases():
    h = build_hkl(1, 4).graph
    ip, ix = h.csr
    allowed = (h.codegree_matrix <= 3).astype(np.uint8)
    yield "enumerate_cycles H_{1,4} L=8 cod<=3", lambda b: b.enumerate_cycles(ip, ix, 8, allowed, -1)

    g = _random_graph(20, 0.45, 1)
    gp, gx = g.csr
    yield "enumerate_cycles G(20,0.45) L=6", lambda b: b.enumerate_cycles(gp, gx, 6, None, -1)

    k = complete_bipartite(5, 5)
    kp, kx = k.csr
    eq = np.identity(k.n, dtype=np.uint8)
    x1 = np.array([1] * 5 + [0] * 5, dtype=np.uint8)
    x2 = 1 - x1
    yield "count_closed_walks K_{5,5} L=8 eq", lambda b: b.count_closed_walks(kp, kx, 8, eq, None, None, x1, x2, -1)

    r = _random_graph(30, 0.3, 2)
    rp, rx = r.csr
    rng = np.random.default_rng(3)
    upper = np.triu(rng.random((r.n, r.n)) < 0.3, 1)
    conf = (upper | upper.T | np.identity(r.n, dtype=bool)).astype(np.uint8)
    starts = np.arange(r.n, dtype=np.int64)
    yield "find_conflict_free_walk G(30,0.3) L=6 dense conflicts", lambda b: b.find_conflict_free_walk(rp, rx, 6, conf, starts, -1)


def _same(a, b):
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if a is None or b is None:
        return a is b
    return a == b


def _time(fn, repeat):
    samples = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)

    if kernels.compiled_backend is None:
        print("compiled backend not built; only the Python kernels will be timed", file=sys.stderr)
    rows = []
    for name, fn in _cases():
        row = {"case": name}
        results = {}
        for b in kernels.backends():
            t, out = _time(lambda: fn(b), args.repeat)
            row[b.BACKEND] = t
            results[b.BACKEND] = out
        if "cython" in results:
            row["speedup"] = row["python"] / row["cython"] if row["cython"] > 0 else None
            row["agree"] = _same(results["cython"], results["python"])
        rows.append(row)

    width = max(len(r["case"]) for r in rows)
    print(f"{'case':<{width}}  {'cython s':>10}  {'python s':>10}  {'speedup':>8}  agree")
    for r in rows:
        cy = f"{r['cython']:.4f}" if "cython" in r else "-"
        sp = f"{r['speedup']:.1f}x" if r.get("speedup") else "-"
        print(f"{r['case']:<{width}}  {cy:>10}  {r['python']:>10.4f}  {sp:>8}  {r.get('agree', '-')}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"backend_default": kernels.BACKEND, "rows": rows}, fh, indent=2, sort_keys=True)
    return 0 if all(r.get("agree", True) for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
