# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: radio neighbourhood queries and BFS route trees."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline double _coord(double t, double s, double e, double t0, double t1) noexcept:
    cdef double frac
    if t1 <= t0 or t >= t1:
        return e
    if t <= t0:
        return s
    frac = (t - t0) / (t1 - t0)
    return s + (e - s) * frac


def positions_at(double t, double[::1] sx, double[::1] sy, double[::1] ex, double[::1] ey,
                 double[::1] tdep, double[::1] tarr):
    cdef Py_ssize_t n = sx.shape[0], i
    xs = np.empty(n, dtype=np.float64)
    ys = np.empty(n, dtype=np.float64)
    cdef double[::1] xv = xs
    cdef double[::1] yv = ys
    for i in range(n):
        xv[i] = _coord(t, sx[i], ex[i], tdep[i], tarr[i])
        yv[i] = _coord(t, sy[i], ey[i], tdep[i], tarr[i])
    return xs, ys


def in_range_at(double t, double[::1] sx, double[::1] sy, double[::1] ex, double[::1] ey,
                double[::1] tdep, double[::1] tarr, Py_ssize_t sender, double radius):
    cdef Py_ssize_t n = sx.shape[0], i
    cdef double px = _coord(t, sx[sender], ex[sender], tdep[sender], tarr[sender])
    cdef double py = _coord(t, sy[sender], ey[sender], tdep[sender], tarr[sender])
    cdef double r2 = radius * radius, dx, dy
    out = []
    for i in range(n):
        if i == sender:
            continue
        dx = _coord(t, sx[i], ex[i], tdep[i], tarr[i]) - px
        dy = _coord(t, sy[i], ey[i], tdep[i], tarr[i]) - py
        if dx * dx + dy * dy <= r2:
            out.append(i)
    return out


def bfs_first_hops(list adj, Py_ssize_t src):
    cdef Py_ssize_t n = len(adj)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dist_a = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] first_a = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue_a = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] dist = dist_a
    cdef cnp.int64_t[::1] first = first_a
    cdef cnp.int64_t[::1] queue = queue_a
    cdef Py_ssize_t head = 0, tail = 0, u, v
    cdef cnp.int64_t du, fu
    dist[src] = 0
    first[src] = src
    for obj in adj[src]:
        v = obj
        if dist[v] == -1:
            dist[v] = 1
            first[v] = v
            queue[tail] = v
            tail += 1
        elif dist[v] == 1 and v < first[v]:
            first[v] = v
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        fu = first[u]
        for obj in adj[u]:
            v = obj
            if dist[v] == -1:
                dist[v] = du
                first[v] = fu
                queue[tail] = v
                tail += 1
            elif dist[v] == du and fu < first[v]:
                first[v] = fu
    return dist_a.tolist(), first_a.tolist()


def mpr_from_lists(Py_ssize_t me, list one, list lists, Py_ssize_t n):
    """Greedy MPR cover of the strict two-hop set; ``one`` sorted ascending.

    ``lists[i]`` holds the advertised neighbours of ``one[i]``. Returns the
    chosen neighbours as a list.
    """
    cdef Py_ssize_t k = len(one), i, j, x, best, gain, best_gain, remaining = 0
    cdef cnp.ndarray[cnp.int32_t, ndim=1] reach = np.zeros(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] last = np.full(n, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] excluded = np.zeros(n, dtype=np.int8)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] covered = np.zeros(n, dtype=np.int8)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] chosen = np.zeros(k, dtype=np.int8)
    cdef list rows = []
    cdef list row
    excluded[me] = 1
    for i in range(k):
        excluded[<Py_ssize_t>one[i]] = 1
    for i in range(k):
        row = []
        for x in lists[i]:
            if not excluded[x]:
                row.append(x)
                if reach[x] == 0:
                    remaining += 1
                reach[x] += 1
                last[x] = i
        rows.append(row)
    if remaining == 0:
        return []
    # sole reachers first
    for i in range(k):
        for x in rows[i]:
            if reach[x] == 1:
                chosen[i] = 1
                break
    for i in range(k):
        if chosen[i]:
            for x in rows[i]:
                if not covered[x]:
                    covered[x] = 1
                    remaining -= 1
    while remaining > 0:
        best = -1
        best_gain = 0
        for i in range(k):
            if chosen[i]:
                continue
            gain = 0
            for x in rows[i]:
                if not covered[x]:
                    gain += 1
            if gain > best_gain:
                best = i
                best_gain = gain
        chosen[best] = 1
        for x in rows[best]:
            if not covered[x]:
                covered[x] = 1
                remaining -= 1
    return [one[i] for i in range(k) if chosen[i]]
