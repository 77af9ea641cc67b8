"""Optimized Link State Routing.

HELLOs discover one- and two-hop neighbours and announce the chosen MPRs;
nodes that have MPR selectors originate TC messages, which are relayed only
by MPRs of the previous hop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .. import kernels
from ..config import OlsrConfig
from .common import RouteEntry, RoutingAgent

HEADER_BYTES = 28
MSG_BYTES = 8
ADDR_BYTES = 4


@dataclass(frozen=True)
class Hello:
    origin: int
    neighbors: FrozenSet[int]
    mprs: FrozenSet[int]

    @property
    def size(self) -> int:
        return HEADER_BYTES + MSG_BYTES + ADDR_BYTES * len(self.neighbors)


@dataclass(frozen=True)
class TcMessage:
    origin: int
    advertised: FrozenSet[int]
    sequence: int

    @property
    def size(self) -> int:
        return HEADER_BYTES + MSG_BYTES + ADDR_BYTES * len(self.advertised)


@dataclass
class TopologyTuple:
    sequence: int
    advertised: FrozenSet[int]
    received_at: float


class OlsrAgent(RoutingAgent):
    name = "olsr"

    def __init__(self, node: int, net, cfg: OlsrConfig, n_nodes: int) -> None:
        super().__init__(node, net, cfg.hello_loss_threshold)
        self.cfg = cfg
        self.n_nodes = n_nodes
        self.nbr_lists: Dict[int, FrozenSet[int]] = {}
        self.mpr_set: Set[int] = set()
        self.mpr_selectors: Set[int] = set()
        self.topology: Dict[int, TopologyTuple] = {}
        self._processed: Dict[int, int] = {}
        self._forwarded: Dict[int, int] = {}
        self.tc_seq = 0
        self.last_trigger = -math.inf
        self._trigger_pending = None
        self.mpr_changes = 0
        self.hold_time = cfg.topology_hold_factor * cfg.tc_interval
        self._dirty = True
        self._valid_until = math.inf
        self._dist: List[int] = []
        self._first: List[int] = []

    @property
    def one_hop(self) -> Set[int]:
        return self.monitor.up

    def start(self) -> None:
        self.net.periodic(self.node, self.cfg.hello_interval, self.hello_tick)
        self.net.periodic(self.node, self.cfg.tc_interval, self.tc_tick)

    # neighbourhood

    @property
    def two_hop(self) -> Dict[int, Set[int]]:
        """Strict two-hop neighbours mapped to the one-hop nodes reaching them."""
        one = self.monitor.up
        me = self.node
        two: Dict[int, Set[int]] = {}
        for b in one:
            for x in self.nbr_lists.get(b, ()):
                if x != me and x not in one:
                    two.setdefault(x, set()).add(b)
        return two

    def _rebuild_neighborhood(self) -> bool:
        """Recompute the MPR set; True if it changed."""
        one = sorted(self.monitor.up)
        lists = [self.nbr_lists.get(b, ()) for b in one]
        mprs = set(kernels.mpr_from_lists(self.node, one, lists, self.n_nodes))
        self._dirty = True
        if mprs != self.mpr_set:
            self.mpr_set = mprs
            return True
        return False

    def _touches_two_hop(self, diff) -> bool:
        """Whether a change in a neighbour's list can alter the two-hop set."""
        one = self.monitor.up
        me = self.node
        return any(x != me and x not in one for x in diff)

    def hello_tick(self, _=None) -> Hello:
        broken = self.monitor.link_interval_tick()
        changed = False
        if broken:
            for b in broken:
                self.nbr_lists.pop(b, None)
                if b in self.mpr_selectors:
                    self.mpr_selectors.discard(b)
                    changed = True
            changed = self._rebuild_neighborhood() or changed
        if changed:
            self.on_mpr_change()
        hello = Hello(self.node, frozenset(self.monitor.up), frozenset(self.mpr_set))
        self.net.broadcast(self.node, hello, "olsr-hello")
        return hello

    def process_hello(self, hello: Hello, sender: int) -> bool:
        """Returns True when the MPR set or the selector set changed."""
        link_up = self.monitor.note_control_heard(sender, self.net.now)
        changed = False
        if self.node in hello.mprs:
            if sender not in self.mpr_selectors:
                self.mpr_selectors.add(sender)
                changed = True
        elif sender in self.mpr_selectors:
            self.mpr_selectors.discard(sender)
            changed = True
        old = self.nbr_lists.get(sender)
        if link_up or old != hello.neighbors:
            self.nbr_lists[sender] = hello.neighbors
            if link_up or old is None or self._touches_two_hop(old ^ hello.neighbors):
                changed = self._rebuild_neighborhood() or changed
            else:
                self._dirty = True
        if changed:
            self.on_mpr_change()
        return changed

    # topology control

    def tc_tick(self, _=None) -> Optional[TcMessage]:
        self.net.count("olsr-tc-ticks")
        if not self.mpr_selectors:
            return None
        self.net.count("olsr-tc-census")
        return self._originate("olsr-tc-periodic")

    def on_mpr_change(self) -> None:
        self.mpr_changes += 1
        self.net.count("olsr-mpr-change")
        if not self.mpr_selectors:
            return
        due = self.last_trigger + self.cfg.trigger_rate_limit
        if self.net.now >= due:
            self._trigger()
        elif self._trigger_pending is None:
            self._trigger_pending = self.net.at(self.node, due, self._deferred_trigger)

    def _deferred_trigger(self, _=None) -> None:
        self._trigger_pending = None
        if self.mpr_selectors:
            self._trigger()

    def _trigger(self) -> None:
        self.last_trigger = self.net.now
        self._originate("olsr-tc-trigger")

    def _originate(self, label: str) -> TcMessage:
        self.tc_seq += 1
        tc = TcMessage(self.node, frozenset(self.mpr_selectors), self.tc_seq)
        self._processed[self.node] = self.tc_seq
        self._forwarded[self.node] = self.tc_seq
        self.net.broadcast(self.node, tc, label)
        return tc

    def process_tc(self, tc: TcMessage, sender: int) -> bool:
        """Absorb ``tc``; returns True if it was retransmitted."""
        origin = tc.origin
        if origin == self.node:
            return False
        if tc.sequence > self._processed.get(origin, 0):
            self._processed[origin] = tc.sequence
            self.topology[origin] = TopologyTuple(tc.sequence, tc.advertised, self.net.now)
            self._dirty = True
            self.net.trace_tc(self.node, tc)
        if sender in self.mpr_selectors and tc.sequence > self._forwarded.get(origin, 0):
            self._forwarded[origin] = tc.sequence
            self.net.broadcast(self.node, tc, "olsr-tc-forward", relay_of=sender)
            return True
        return False

    def receive(self, packet, sender: int):
        if type(packet) is Hello:
            return self.process_hello(packet, sender)
        return self.process_tc(packet, sender)

    # routes

    def _recompute(self) -> None:
        now = self.net.now
        if not self._dirty and now < self._valid_until:
            return
        # advertised links are symmetric, so they are walked in both directions
        adj: List[Set[int]] = [set() for _ in range(self.n_nodes)]
        one = self.monitor.up
        adj[self.node].update(one)
        for b in one:
            adj[b].update(self.nbr_lists.get(b, ()))
        horizon = now - self.hold_time
        valid_until = math.inf
        for origin, tup in self.topology.items():
            if tup.received_at < horizon:
                continue
            valid_until = min(valid_until, tup.received_at + self.hold_time)
            adj[origin].update(tup.advertised)
            for x in tup.advertised:
                adj[x].add(origin)
        adj = [sorted(s) for s in adj]
        self._dist, self._first = kernels.bfs_first_hops(adj, self.node)
        self._valid_until = valid_until
        self._dirty = False

    def next_hop(self, destination: int) -> Optional[int]:
        self._recompute()
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

    def topology_edges(self) -> Set[Tuple[int, int]]:
        return {(o, a) for o, t in self.topology.items() for a in t.advertised}
