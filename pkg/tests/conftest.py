"""Shared fixtures: a stand-in for the network services agents rely on."""
from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from pmanet.kernel import TIMER, Simulator


class StubNet:
    """Records broadcasts instead of putting them on a medium."""

    def __init__(self):
        self.sim = Simulator()
        self.sent = []
        self.events = Counter()
        self.tc_seen = []

    @property
    def now(self):
        return self.sim.now

    def periodic(self, node, interval, fn):
        k = [1]

        def tick(_):
            k[0] += 1
            self.sim.schedule(k[0] * interval, TIMER, node, tick)
            fn()

        self.sim.schedule(interval, TIMER, node, tick)

    def at(self, node, t, fn):
        return self.sim.schedule(t, TIMER, node, fn)

    def cancel(self, handle):
        self.sim.cancel(handle)

    def broadcast(self, node, packet, label, relay_of=None):
        self.sent.append((self.now, node, label, packet))
        return True

    def count(self, name, k=1):
        self.events[name] += k

    def trace_tc(self, node, tc):
        self.tc_seen.append((node, tc))

    def labels(self):
        return [s[2] for s in self.sent]


@pytest.fixture
def stub_net():
    return StubNet()


def chain_positions(n, spacing=200.0):
    return np.array([[100.0 + i * spacing, 500.0] for i in range(n)])


def random_connected(n, rng, area=1000.0, radius=250.0):
    from pmanet.mobility import connected_placement

    return connected_placement(n, area, area, radius, rng)


def unit_disk_adjacency(points, radius=250.0):
    n = len(points)
    d2 = ((points[:, None, :] - points[None, :, :]) ** 2).sum(-1)
    return [[j for j in range(n) if j != i and d2[i, j] <= radius * radius] for i in range(n)]


def bfs_all(adj, src):
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


# one summary line per acceptance criterion

ACCEPTANCE_LINES = []


def report_criterion(number, name, passed, detail=""):
    line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {name}"
    if detail:
        line += f": {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
