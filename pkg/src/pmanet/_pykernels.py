"""Pure-Python/numpy implementations of the hot kernels.

Behaviourally identical to the compiled ``_ckernels`` module; used when the
extension is not built or ``PMANET_PURE=1`` is set.
"""
from __future__ import annotations

from collections import deque
from typing import List, Sequence, Tuple

import numpy as np


def positions_at(t, sx, sy, ex, ey, tdep, tarr):
    """Positions of every node at time ``t`` given their current mobility legs."""
    span = tarr - tdep
    arrived = (span <= 0.0) | (t >= tarr)
    waiting = t <= tdep
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = (t - tdep) / span
    xs = np.where(arrived, ex, np.where(waiting, sx, sx + (ex - sx) * frac))
    ys = np.where(arrived, ey, np.where(waiting, sy, sy + (ey - sy) * frac))
    return xs, ys


def in_range_at(t, sx, sy, ex, ey, tdep, tarr, sender: int, radius: float) -> List[int]:
    xs, ys = positions_at(t, sx, sy, ex, ey, tdep, tarr)
    d2 = (xs - xs[sender]) ** 2 + (ys - ys[sender]) ** 2
    hits = np.flatnonzero(d2 <= radius * radius)
    return [int(i) for i in hits if i != sender]


def bfs_first_hops(adj: Sequence[Sequence[int]], src: int) -> Tuple[List[int], List[int]]:
    """Hop distances and first hops from ``src``.

    Among equal-length paths the smallest first hop wins. Unreachable nodes
    get distance -1 and first hop -1.
    """
    n = len(adj)
    dist = [-1] * n
    first = [-1] * n
    dist[src] = 0
    first[src] = src
    queue = deque()
    for v in adj[src]:
        if dist[v] == -1:
            dist[v] = 1
            first[v] = v
            queue.append(v)
        elif dist[v] == 1 and v < first[v]:
            first[v] = v
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        fu = first[u]
        for v in adj[u]:
            dv = dist[v]
            if dv == -1:
                dist[v] = du
                first[v] = fu
                queue.append(v)
            elif dv == du and fu < first[v]:
                first[v] = fu
    return dist, first


def mpr_from_lists(me: int, one: Sequence[int], lists: Sequence[Sequence[int]], n: int) -> List[int]:
    """Greedy MPR cover of the strict two-hop set; ``one`` sorted ascending."""
    excluded = set(one)
    excluded.add(me)
    rows = [[x for x in lst if x not in excluded] for lst in lists]
    reach = {}
    for row in rows:
        for x in row:
            reach[x] = reach.get(x, 0) + 1
    if not reach:
        return []
    chosen = [any(reach[x] == 1 for x in row) for row in rows]
    covered = set()
    for i, row in enumerate(rows):
        if chosen[i]:
            covered.update(row)
    uncovered = set(reach) - covered
    while uncovered:
        best, best_gain = -1, 0
        for i, row in enumerate(rows):
            if chosen[i]:
                continue
            gain = sum(1 for x in row if x in uncovered)
            if gain > best_gain:
                best, best_gain = i, gain
        chosen[best] = True
        uncovered.difference_update(rows[best])
    return [one[i] for i in range(len(one)) if chosen[i]]
