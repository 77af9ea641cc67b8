"""Node placement and random-waypoint mobility.

Each node owns its own random stream, and legs are advanced lazily when a
query needs them, so the order in which nodes are queried never changes the
trajectories.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import kernels


@dataclass(frozen=True)
class Position:
    x: float
    y: float


@dataclass(frozen=True)
class MobilityState:
    current: Position
    waypoint: Position
    speed: float
    pause_until: float


class RandomWaypoint:
    """Random waypoint over an ``area_x`` x ``area_y`` field.

    With ``speed=None`` the nodes stay at their initial positions.
    """

    def __init__(
        self,
        initial: np.ndarray,
        area_x: float,
        area_y: float,
        speed: Optional[float],
        pause: float,
        streams: List[np.random.Generator],
    ) -> None:
        n = len(initial)
        self.n = n
        self.area_x = float(area_x)
        self.area_y = float(area_y)
        self.speed = speed
        self.pause = float(pause)
        self._rngs = streams
        self.sx = np.ascontiguousarray(initial[:, 0], dtype=np.float64)
        self.sy = np.ascontiguousarray(initial[:, 1], dtype=np.float64)
        self.ex = self.sx.copy()
        self.ey = self.sy.copy()
        self.tdep = np.zeros(n)
        self.tarr = np.zeros(n)
        self.tresume = np.full(n, np.inf)
        self._next_resume = np.inf
        self._cache_t = -1.0
        self._cache = None
        if speed is not None:
            for i in range(n):
                self._start_leg(i, 0.0)
            self._next_resume = float(self.tresume.min()) if n else np.inf

    def _start_leg(self, i: int, t0: float) -> None:
        wx, wy = self._rngs[i].uniform((0.0, 0.0), (self.area_x, self.area_y))
        dist = float(np.hypot(wx - self.ex[i], wy - self.ey[i]))
        self.sx[i] = self.ex[i]
        self.sy[i] = self.ey[i]
        self.ex[i] = wx
        self.ey[i] = wy
        self.tdep[i] = t0
        self.tarr[i] = t0 + dist / self.speed
        self.tresume[i] = self.tarr[i] + self.pause

    def set_leg(self, i: int, start: Position, waypoint: Position, depart: float) -> None:
        """Force node ``i`` onto a given leg (scripted scenarios and tests)."""
        if self.speed is None:
            raise ValueError("static nodes have no legs")
        dist = float(np.hypot(waypoint.x - start.x, waypoint.y - start.y))
        self.sx[i], self.sy[i] = start.x, start.y
        self.ex[i], self.ey[i] = waypoint.x, waypoint.y
        self.tdep[i] = depart
        self.tarr[i] = depart + dist / self.speed
        self.tresume[i] = self.tarr[i] + self.pause
        self._next_resume = float(self.tresume.min())
        self._cache_t = -1.0

    def advance(self, t: float) -> None:
        """Bring every leg forward so that it covers time ``t``."""
        if t <= self._next_resume:
            return
        for i in np.flatnonzero(self.tresume < t):
            while self.tresume[i] < t:
                self._start_leg(int(i), float(self.tresume[i]))
        self._next_resume = float(self.tresume.min())
        self._cache_t = -1.0

    def position_at(self, node: int, t: float) -> Position:
        self.advance(t)
        xs, ys = kernels.positions_at(t, self.sx, self.sy, self.ex, self.ey, self.tdep, self.tarr)
        return Position(float(xs[node]), float(ys[node]))

    def positions(self, t: float):
        self.advance(t)
        if t != self._cache_t:
            self._cache = kernels.positions_at(t, self.sx, self.sy, self.ex, self.ey, self.tdep, self.tarr)
            self._cache_t = t
        return self._cache

    def in_range(self, sender: int, t: float, radius: float) -> List[int]:
        self.advance(t)
        return kernels.in_range_at(t, self.sx, self.sy, self.ex, self.ey, self.tdep, self.tarr, sender, radius)

    def state(self, node: int, t: float) -> MobilityState:
        cur = self.position_at(node, t)
        return MobilityState(
            current=cur,
            waypoint=Position(float(self.ex[node]), float(self.ey[node])),
            speed=self.speed or 0.0,
            pause_until=float(self.tresume[node]),
        )


def uniform_placement(n: int, area_x: float, area_y: float, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform((0.0, 0.0), (area_x, area_y), size=(n, 2))


def is_connected(points: np.ndarray, radius: float) -> bool:
    n = len(points)
    if n <= 1:
        return True
    d2 = ((points[:, None, :] - points[None, :, :]) ** 2).sum(-1)
    adj = d2 <= radius * radius
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = np.flatnonzero(adj[frontier].any(axis=0) & ~seen)
        seen[nxt] = True
        frontier = list(nxt)
    return bool(seen.all())


def connected_placement(
    n: int, area_x: float, area_y: float, radius: float, rng: np.random.Generator, attempts: int = 100_000
) -> np.ndarray:
    for _ in range(attempts):
        pts = uniform_placement(n, area_x, area_y, rng)
        if is_connected(pts, radius):
            return pts
    raise RuntimeError(f"no connected placement of {n} nodes found in {attempts} attempts")
