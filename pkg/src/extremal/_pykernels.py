"""Pure-Python enumeration kernels.

Same signatures and results as the compiled ``_ckernels`` module. Graphs arrive
in CSR form (``indptr``, ``indices``); relation matrices are dense uint8 arrays
indexed by vertex id (or by edge id for edge relations). A negative ``budget``
means unlimited.
"""

from __future__ import annotations

BACKEND = "python"


def _lists(indptr, indices):
    ip = [int(x) for x in indptr]
    ix = [int(x) for x in indices]
    return [ix[ip[v]:ip[v + 1]] for v in range(len(ip) - 1)]


def enumerate_cycles(indptr, indices, length, allowed, budget):
    """All labelled genuine cycles ``(x_0, ..., x_{L-1})`` in lexicographic order.

    ``allowed`` (optional) must hold for every distance-two pair
    ``(x_i, x_{i+2})`` taken cyclically. Returns ``(cycles, nodes, complete)``.
    """
    adj = _lists(indptr, indices)
    n = len(adj)
    ok = None if allowed is None else [[bool(allowed[u, w]) for w in range(n)] for u in range(n)]
    adjset = [set(a) for a in adj]
    out = []
    path = [0] * length
    used = [False] * n
    nodes = 0
    limit = budget if budget >= 0 else float("inf")

    def extend(t):
        nonlocal nodes
        last = path[t - 1]
        for w in adj[last]:
            if used[w]:
                continue
            if ok is not None and t >= 2 and not ok[path[t - 2]][w]:
                continue
            nodes += 1
            if nodes > limit:
                return False
            path[t] = w
            if t == length - 1:
                if path[0] in adjset[w] and (
                    ok is None or (ok[path[t - 1]][path[0]] and ok[w][path[1]])
                ):
                    out.append(tuple(path))
                continue
            used[w] = True
            cont = extend(t + 1)
            used[w] = False
            if not cont:
                return False
        return True

    for v in range(n):
        nodes += 1
        if nodes > limit:
            return out, nodes, False
        path[0] = v
        used[v] = True
        cont = extend(1)
        used[v] = False
        if not cont:
            return out, nodes, False
    return out, nodes, True


def count_closed_walks(indptr, indices, length, vconf, econf, eid, in_x1, in_x2, budget):
    """Count closed walks of the given length, and those containing a conflicting pair.

    A walk ``(x_0, ..., x_{L-1})`` conflicts if ``vconf[x_i, x_j]`` for some
    positions ``i != j`` or ``econf[e_i, e_j]`` for some ``i != j`` where
    ``e_i = eid[x_i, x_{i+1}]``. When ``in_x1``/``in_x2`` are given, only walks
    alternating X1, X2, X1, ... or X2, X1, X2, ... are counted.
    Returns ``(total, conflicting, nodes, complete)``.
    """
    adj = _lists(indptr, indices)
    n = len(adj)
    vc = None if vconf is None else [[bool(vconf[u, w]) for w in range(n)] for u in range(n)]
    ec = None
    ed = None
    if econf is not None:
        m = econf.shape[0]
        ec = [[bool(econf[a, b]) for b in range(m)] for a in range(m)]
        ed = [[int(eid[u, w]) for w in range(n)] for u in range(n)]
    x1 = None if in_x1 is None else [bool(in_x1[v]) for v in range(n)]
    x2 = None if in_x2 is None else [bool(in_x2[v]) for v in range(n)]
    walk = [0] * length
    edges = [0] * length
    total = 0
    bad = 0
    nodes = 0
    limit = budget if budget >= 0 else float("inf")

    def vertex_clash(t, w):
        for j in range(t):
            if vc[walk[j]][w]:
                return True
        return False

    def edge_clash(t, e):
        # e is edge index t; compare against edges 0..t-1
        row = ec[e]
        for j in range(t):
            if row[edges[j]]:
                return True
        return False

    def side_ok(t, w, pat_a, pat_b):
        if x1 is None:
            return pat_a, pat_b
        even = t % 2 == 0
        a = pat_a and (x1[w] if even else x2[w])
        b = pat_b and (x2[w] if even else x1[w])
        return a, b

    def extend(t, pat_a, pat_b, clash):
        nonlocal nodes, total, bad
        last = walk[t - 1]
        for w in adj[last]:
            a, b = side_ok(t, w, pat_a, pat_b)
            if not (a or b):
                continue
            nodes += 1
            if nodes > limit:
                return False
            walk[t] = w
            c = clash
            if not c and vc is not None and vertex_clash(t, w):
                c = True
            if ec is not None:
                edges[t - 1] = ed[last][w]
                if not c and edge_clash(t - 1, edges[t - 1]):
                    c = True
            if t == length - 1:
                first = walk[0]
                if first not in adjset[w]:
                    continue
                if ec is not None:
                    edges[t] = ed[w][first]
                    if not c and edge_clash(t, edges[t]):
                        c = True
                total += 1
                if c:
                    bad += 1
                continue
            if not extend(t + 1, a, b, c):
                return False
        return True

    adjset = [set(a) for a in adj]
    for v in range(n):
        a, b = side_ok(0, v, True, True)
        if not (a or b):
            continue
        nodes += 1
        if nodes > limit:
            return total, bad, nodes, False
        walk[0] = v
        if not extend(1, a, b, False):
            return total, bad, nodes, False
    return total, bad, nodes, True


def find_conflict_free_walk(indptr, indices, length, vconf, starts, budget):
    """First closed walk with no ``vconf[x_i, x_j]`` for positions ``i != j``.

    At each step, neighbours not yet on the walk are tried before repeated
    ones, each group in CSR order. Returns ``(walk or None, nodes, complete)``;
    ``complete`` is False only when the budget ran out first.
    """
    adj = _lists(indptr, indices)
    n = len(adj)
    vc = None if vconf is None else [[bool(vconf[u, w]) for w in range(n)] for u in range(n)]
    adjset = [set(a) for a in adj]
    walk = [0] * length
    onwalk = [0] * n
    nodes = 0
    limit = budget if budget >= 0 else float("inf")
    found = None

    def clashes(t, w):
        if vc is None:
            return False
        for j in range(t):
            if vc[walk[j]][w]:
                return True
        return False

    def extend(t):
        nonlocal nodes, found
        nb = adj[walk[t - 1]]
        for phase in (0, 1):
            for w in nb:
                if (onwalk[w] > 0) != (phase == 1) or clashes(t, w):
                    continue
                nodes += 1
                if nodes > limit:
                    return False
                walk[t] = w
                if t == length - 1:
                    if walk[0] in adjset[w]:
                        found = tuple(walk)
                        return True
                    continue
                onwalk[w] += 1
                ok = extend(t + 1)
                onwalk[w] -= 1
                if not ok:
                    return False
                if found is not None:
                    return True
        return True

    for v in starts:
        v = int(v)
        nodes += 1
        if nodes > limit:
            return None, nodes, False
        walk[0] = v
        onwalk[v] += 1
        ok = extend(1)
        onwalk[v] -= 1
        if not ok:
            return None, nodes, False
        if found is not None:
            return found, nodes, True
    return None, nodes, True
