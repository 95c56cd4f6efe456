# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; drop-in replacement for ``_pykernels``."""

import numpy as np

BACKEND = "cython"


cdef unsigned char[:, :] _adjacency(long long[:] ip, long long[:] ix, Py_ssize_t n):
    cdef unsigned char[:, :] a = np.zeros((n, n), dtype=np.uint8)
    cdef Py_ssize_t v, p
    for v in range(n):
        for p in range(ip[v], ip[v + 1]):
            a[v, ix[p]] = 1
    return a


def enumerate_cycles(indptr, indices, Py_ssize_t length, allowed, long long budget):
    cdef long long[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long long[:] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef unsigned char[:, :] adj = _adjacency(ip, ix, n)
    cdef bint has_ok = allowed is not None
    cdef unsigned char[:, :] ok
    if has_ok:
        ok = np.ascontiguousarray(allowed, dtype=np.uint8)
    else:
        ok = np.zeros((1, 1), dtype=np.uint8)
    cdef long long[:] path = np.zeros(length, dtype=np.int64)
    cdef long long[:] pos = np.zeros(length + 1, dtype=np.int64)
    cdef unsigned char[:] used = np.zeros(max(n, 1), dtype=np.uint8)
    cdef long long nodes = 0
    cdef bint unlimited = budget < 0
    cdef Py_ssize_t v, t, w
    out = []
    for v in range(n):
        nodes += 1
        if not unlimited and nodes > budget:
            return out, nodes, False
        path[0] = v
        used[v] = 1
        t = 1
        pos[1] = ip[v]
        while t > 0:
            if pos[t] < ip[path[t - 1] + 1]:
                w = ix[pos[t]]
                pos[t] += 1
                if used[w]:
                    continue
                if has_ok and t >= 2 and not ok[path[t - 2], w]:
                    continue
                nodes += 1
                if not unlimited and nodes > budget:
                    used[v] = 0
                    return out, nodes, False
                path[t] = w
                if t == length - 1:
                    if adj[w, path[0]] and (not has_ok or (ok[path[t - 1], path[0]] and ok[w, path[1]])):
                        out.append(tuple([path[i] for i in range(length)]))
                    continue
                used[w] = 1
                t += 1
                pos[t] = ip[w]
            else:
                t -= 1
                if t >= 1:
                    used[path[t]] = 0
        used[v] = 0
    return out, nodes, True


def count_closed_walks(indptr, indices, Py_ssize_t length, vconf, econf, eid, in_x1, in_x2, long long budget):
    cdef long long[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long long[:] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef unsigned char[:, :] adj = _adjacency(ip, ix, n)
    cdef bint has_v = vconf is not None
    cdef bint has_e = econf is not None
    cdef bint has_side = in_x1 is not None
    cdef unsigned char[:, :] vc = np.ascontiguousarray(vconf, dtype=np.uint8) if has_v else np.zeros((1, 1), dtype=np.uint8)
    cdef unsigned char[:, :] ec = np.ascontiguousarray(econf, dtype=np.uint8) if has_e else np.zeros((1, 1), dtype=np.uint8)
    cdef long long[:, :] ed = np.ascontiguousarray(eid, dtype=np.int64) if has_e else np.zeros((1, 1), dtype=np.int64)
    cdef unsigned char[:] s1 = np.ascontiguousarray(in_x1, dtype=np.uint8) if has_side else np.zeros(1, dtype=np.uint8)
    cdef unsigned char[:] s2 = np.ascontiguousarray(in_x2, dtype=np.uint8) if has_side else np.zeros(1, dtype=np.uint8)
    cdef long long[:] walk = np.zeros(length, dtype=np.int64)
    cdef long long[:] edges = np.zeros(length, dtype=np.int64)
    cdef long long[:] pos = np.zeros(length + 1, dtype=np.int64)
    cdef unsigned char[:] pa = np.zeros(length, dtype=np.uint8)
    cdef unsigned char[:] pb = np.zeros(length, dtype=np.uint8)
    cdef unsigned char[:] cl = np.zeros(length, dtype=np.uint8)
    cdef long long total = 0, bad = 0, nodes = 0
    cdef bint unlimited = budget < 0
    cdef Py_ssize_t v, t, w, j, e
    cdef bint a, b, c
    for v in range(n):
        if has_side:
            a = s1[v]
            b = s2[v]
            if not (a or b):
                continue
        else:
            a = b = True
        nodes += 1
        if not unlimited and nodes > budget:
            return total, bad, nodes, False
        walk[0] = v
        pa[0] = a
        pb[0] = b
        cl[0] = 0
        t = 1
        pos[1] = ip[v]
        while t > 0:
            if pos[t] < ip[walk[t - 1] + 1]:
                w = ix[pos[t]]
                pos[t] += 1
                if has_side:
                    if t % 2 == 0:
                        a = pa[t - 1] and s1[w]
                        b = pb[t - 1] and s2[w]
                    else:
                        a = pa[t - 1] and s2[w]
                        b = pb[t - 1] and s1[w]
                    if not (a or b):
                        continue
                else:
                    a = b = True
                nodes += 1
                if not unlimited and nodes > budget:
                    return total, bad, nodes, False
                walk[t] = w
                c = cl[t - 1]
                if not c and has_v:
                    for j in range(t):
                        if vc[walk[j], w]:
                            c = True
                            break
                if has_e:
                    edges[t - 1] = ed[walk[t - 1], w]
                    if not c:
                        for j in range(t - 1):
                            if ec[edges[t - 1], edges[j]]:
                                c = True
                                break
                if t == length - 1:
                    if not adj[w, walk[0]]:
                        continue
                    if has_e:
                        e = ed[w, walk[0]]
                        edges[t] = e
                        if not c:
                            for j in range(t):
                                if ec[e, edges[j]]:
                                    c = True
                                    break
                    total += 1
                    if c:
                        bad += 1
                    continue
                pa[t] = a
                pb[t] = b
                cl[t] = c
                t += 1
                pos[t] = ip[w]
            else:
                t -= 1
    return total, bad, nodes, True


def find_conflict_free_walk(indptr, indices, Py_ssize_t length, vconf, starts, long long budget):
    cdef long long[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long long[:] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef unsigned char[:, :] adj = _adjacency(ip, ix, n)
    cdef bint has_v = vconf is not None
    cdef unsigned char[:, :] vc = np.ascontiguousarray(vconf, dtype=np.uint8) if has_v else np.zeros((1, 1), dtype=np.uint8)
    cdef long long[:] st = np.ascontiguousarray(starts, dtype=np.int64)
    cdef long long[:] walk = np.zeros(length, dtype=np.int64)
    cdef long long[:] pos = np.zeros(length + 1, dtype=np.int64)
    cdef long long[:] onwalk = np.zeros(max(n, 1), dtype=np.int64)
    cdef long long nodes = 0
    cdef bint unlimited = budget < 0
    cdef Py_ssize_t si, v, t, w, j, deg, p, base
    cdef bint c
    for si in range(st.shape[0]):
        v = st[si]
        nodes += 1
        if not unlimited and nodes > budget:
            return None, nodes, False
        walk[0] = v
        onwalk[v] += 1
        t = 1
        pos[1] = 0
        while t > 0:
            base = ip[walk[t - 1]]
            deg = ip[walk[t - 1] + 1] - base
            if pos[t] < 2 * deg:
                p = pos[t]
                pos[t] += 1
                w = ix[base + (p % deg)]
                # first pass: vertices off the walk; second pass: repeats
                if (onwalk[w] > 0) != (p >= deg):
                    continue
                c = False
                if has_v:
                    for j in range(t):
                        if vc[walk[j], w]:
                            c = True
                            break
                if c:
                    continue
                nodes += 1
                if not unlimited and nodes > budget:
                    return None, nodes, False
                walk[t] = w
                if t == length - 1:
                    if adj[w, walk[0]]:
                        return tuple([walk[i] for i in range(length)]), nodes, True
                    continue
                onwalk[w] += 1
                t += 1
                pos[t] = 0
            else:
                t -= 1
                if t >= 1:
                    onwalk[walk[t]] -= 1
        onwalk[v] -= 1
    return None, nodes, True
