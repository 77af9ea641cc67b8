"""Machinery shared by the three protocols: link sensing, route entries,
data packets and hop-by-hop forwarding."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set

INFINITY = math.inf
DEFAULT_TTL = 32
DEFAULT_LOSS_THRESHOLD = 3

# forwarding outcomes
DELIVERED = "delivered"
FORWARDED = "forwarded"
DROP_NOROUTE = "noroute"
DROP_TTL = "ttl"
DROP_QUEUE = "queue"
DROP_LINK = "link"

DROP_CAUSES = (DROP_NOROUTE, DROP_TTL, DROP_QUEUE, DROP_LINK)


@dataclass
class LinkStatus:
    neighbor: int
    last_heard: float
    misses: int = 0
    up: bool = True


@dataclass
class RouteEntry:
    destination: int
    next_hop: int
    metric: float
    sequence: int = 0
    installed_at: float = 0.0
    valid: bool = True


@dataclass
class DataPacket:
    source: int
    destination: int
    size: int
    created_at: float
    hops_traversed: int = 0
    uid: int = 0


class LinkMonitor:
    """Interval-based neighbour sensing for one node.

    A neighbour that stays silent for ``loss_threshold`` consecutive
    intervals is reported broken once; hearing it again brings the link back
    up.
    """

    def __init__(self, node: int, loss_threshold: int = DEFAULT_LOSS_THRESHOLD) -> None:
        if loss_threshold < 1:
            raise ValueError("loss_threshold must be >= 1")
        self.node = node
        self.loss_threshold = loss_threshold
        self.links: Dict[int, LinkStatus] = {}
        self._heard: Set[int] = set()
        self.up: Set[int] = set()

    def note_control_heard(self, neighbor: int, t: float) -> bool:
        """Record a control packet from ``neighbor``; True on link-up."""
        if neighbor == self.node:
            raise ValueError("a node cannot hear itself as a neighbour")
        self._heard.add(neighbor)
        st = self.links.get(neighbor)
        if st is None:
            self.links[neighbor] = LinkStatus(neighbor, t)
            self.up.add(neighbor)
            return True
        st.last_heard = t
        st.misses = 0
        if not st.up:
            st.up = True
            self.up.add(neighbor)
            return True
        return False

    def link_interval_tick(self) -> List[int]:
        """Close one sensing interval and return newly broken neighbours."""
        broken = []
        heard = self._heard
        for nb in sorted(self.up):
            if nb in heard:
                continue
            st = self.links[nb]
            st.misses += 1
            if st.misses >= self.loss_threshold:
                st.up = False
                broken.append(nb)
        for nb in broken:
            self.up.discard(nb)
        self._heard = set()
        return broken

    def is_up(self, neighbor: int) -> bool:
        return neighbor in self.up


def forward_data(node: int, pkt: DataPacket, next_hop: Optional[int], ttl: int = DEFAULT_TTL) -> str:
    """Decide what happens to ``pkt`` at ``node``.

    Returns ``FORWARDED`` (and bumps the hop count) when a next hop is known,
    otherwise the drop cause. Packets addressed to ``node`` are delivered.
    """
    if pkt.destination == node:
        return DELIVERED
    if pkt.hops_traversed >= ttl:
        return DROP_TTL
    if next_hop is None:
        return DROP_NOROUTE
    pkt.hops_traversed += 1
    return FORWARDED


class RoutingAgent:
    """Base class for per-node protocol instances.

    Subclasses call ``self.net.broadcast`` to emit control packets and
    ``self.net.periodic`` to schedule periodic work.
    """

    name = "base"

    def __init__(self, node: int, net, loss_threshold: int = DEFAULT_LOSS_THRESHOLD) -> None:
        self.node = node
        self.net = net
        self.monitor = LinkMonitor(node, loss_threshold)

    def start(self) -> None:
        raise NotImplementedError

    def receive(self, packet, sender: int) -> None:
        raise NotImplementedError

    def next_hop(self, destination: int) -> Optional[int]:
        raise NotImplementedError

    def note_route_used(self, destination: int) -> None:
        pass

    def routes(self) -> Dict[int, RouteEntry]:
        raise NotImplementedError


def sorted_ids(ids: Iterable[int]) -> tuple:
    return tuple(sorted(ids))
