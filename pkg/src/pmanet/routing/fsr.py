"""Fisheye State Routing.

Each node keeps a full topology table but refreshes it at two rates: entries
within ``scope_radius`` hops go out every ``inner_interval``, the rest every
``outer_interval``. Updates only ever reach one-hop neighbours and there are
no triggered updates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .. import kernels
from ..config import FsrConfig
from .common import RouteEntry, RoutingAgent

HEADER_BYTES = 28
ENTRY_BYTES = 8
NEIGHBOR_BYTES = 4


@dataclass(frozen=True)
class FsrUpdate:
    origin: int
    carried: Tuple[Tuple[int, FrozenSet[int], int], ...]
    scope: str = "inner"

    @property
    def size(self) -> int:
        return HEADER_BYTES + sum(ENTRY_BYTES + NEIGHBOR_BYTES * len(nbrs) for _, nbrs, _ in self.carried)


@dataclass
class TopologyEntry:
    neighbors: FrozenSet[int]
    sequence: int
    last_refresh: float


class FsrAgent(RoutingAgent):
    name = "fsr"

    def __init__(self, node: int, net, cfg: FsrConfig, n_nodes: int) -> None:
        super().__init__(node, net, cfg.loss_threshold)
        self.cfg = cfg
        self.n_nodes = n_nodes
        self.seq = 0
        self.topology: Dict[int, TopologyEntry] = {node: TopologyEntry(frozenset(), 0, 0.0)}
        self._dirty = True
        self._dist: List[int] = []
        self._first: List[int] = []

    def start(self) -> None:
        self.net.periodic(self.node, self.cfg.inner_interval, self.periodic_inner)
        self.net.periodic(self.node, self.cfg.outer_interval, self.periodic_outer)

    # topology bookkeeping

    def _recompute(self) -> None:
        if not self._dirty:
            return
        self.topology[self.node].neighbors = frozenset(self.monitor.up)
        adj: List[List[int]] = [[] for _ in range(self.n_nodes)]
        for origin, entry in self.topology.items():
            adj[origin] = list(entry.neighbors)
        self._dist, self._first = kernels.bfs_first_hops(adj, self.node)
        self._dirty = False

    def hop_distances(self) -> Dict[int, int]:
        self._recompute()
        return {d: self._dist[d] for d in self.topology if d != self.node and self._dist[d] > 0}

    def scope_partition(self) -> Tuple[Set[int], Set[int]]:
        """(inner, outer) destinations as seen from this node."""
        dist = self.hop_distances()
        inner = {d for d, h in dist.items() if h <= self.cfg.scope_radius}
        outer = {d for d in self.topology if d != self.node and d not in inner}
        return inner, outer

    # timers

    def periodic_inner(self, _=None) -> FsrUpdate:
        if self.monitor.link_interval_tick():
            self._dirty = True
        self.seq += 1
        own = self.topology[self.node]
        own.neighbors = frozenset(self.monitor.up)
        own.sequence = self.seq
        own.last_refresh = self.net.now
        inner, _ = self.scope_partition()
        carried = [(self.node, own.neighbors, self.seq)]
        carried += [(d, self.topology[d].neighbors, self.topology[d].sequence) for d in sorted(inner)]
        update = FsrUpdate(self.node, tuple(carried), "inner")
        self.net.broadcast(self.node, update, "fsr-inner")
        return update

    def periodic_outer(self, _=None) -> FsrUpdate:
        _, outer = self.scope_partition()
        carried = tuple((d, self.topology[d].neighbors, self.topology[d].sequence) for d in sorted(outer))
        update = FsrUpdate(self.node, carried, "outer")
        self.net.broadcast(self.node, update, "fsr-outer")
        return update

    # reception

    def receive(self, update: FsrUpdate, sender: int) -> int:
        """Merge fresher link states; returns how many entries were replaced."""
        if self.monitor.note_control_heard(sender, self.net.now):
            self._dirty = True
        replaced = 0
        now = self.net.now
        for dest, nbrs, seq in update.carried:
            if dest == self.node:
                continue
            stored = self.topology.get(dest)
            if stored is None or seq > stored.sequence:
                self.topology[dest] = TopologyEntry(nbrs, seq, now)
                replaced += 1
        if replaced:
            self._dirty = True
        return replaced

    # routing

    def next_hop(self, destination: int) -> Optional[int]:
        self._recompute()
        if destination >= len(self._first):
            return None
        hop = self._first[destination]
        if hop < 0 or hop == self.node:
            return None
        return hop

    def routes(self) -> Dict[int, RouteEntry]:
        self._recompute()
        now = self.net.now
        return {
            d: RouteEntry(d, self._first[d], self._dist[d], 0, now)
            for d in range(self.n_nodes)
            if d != self.node and self._dist[d] > 0
        }
