"""One simulation run: nodes, radio, protocol agents, traffic and counters."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .analytics import MetricsReport, compute_metrics
from .config import ScenarioConfig
from .kernel import PACKET_DELIVERY, TIMER, Simulator
from .mobility import RandomWaypoint, connected_placement, uniform_placement
from .radio import Frame, Medium
from .routing.common import (
    DELIVERED,
    DROP_CAUSES,
    DROP_QUEUE,
    FORWARDED,
    DataPacket,
    RoutingAgent,
    forward_data,
)
from .routing.dsdv import DsdvAgent
from .routing.fsr import FsrAgent
from .routing.olsr import OlsrAgent, TcMessage
from .traffic import CbrSource, build_flows

AUDIT_COLUMNS = ("time", "event", "node", "label", "size", "peer", "origin", "seq", "value")


@dataclass
class Counters:
    generated: int = 0
    delivered: int = 0
    delivered_bytes: int = 0
    delay_sum: float = 0.0
    control_tx: int = 0
    control_queue_drops: int = 0
    drops: Dict[str, int] = field(default_factory=lambda: {c: 0 for c in DROP_CAUSES})
    tx_by_label: Counter = field(default_factory=Counter)
    events: Counter = field(default_factory=Counter)


@dataclass
class RunResult:
    config: ScenarioConfig
    counters: Counters
    report: MetricsReport
    in_flight: int
    audit: Optional[List[tuple]] = None
    trace: Optional[List[tuple]] = None


def make_streams(seed: int, n: int):
    root = np.random.SeedSequence(seed)
    placement, mobility, traffic, loss = root.spawn(4)
    node_streams = [np.random.default_rng(s) for s in mobility.spawn(n)]
    return (
        np.random.default_rng(placement),
        node_streams,
        np.random.default_rng(traffic),
        np.random.default_rng(loss),
    )


class Network:
    """Wires the pieces of one scenario together; ``run()`` executes it."""

    def __init__(
        self,
        config: ScenarioConfig,
        audit: bool = False,
        trace: bool = False,
        positions: Optional[np.ndarray] = None,
    ) -> None:
        config.validate()
        self.config = config
        n = config.nodes
        self.n = n
        placement_rng, node_rngs, traffic_rng, loss_rng = make_streams(config.seed, n)
        if positions is not None:
            initial = np.asarray(positions, dtype=np.float64).reshape(n, 2)
        elif config.connected_placement:
            initial = connected_placement(n, config.area_x, config.area_y, config.radio.range, placement_rng)
        else:
            initial = uniform_placement(n, config.area_x, config.area_y, placement_rng)
        speed = config.mobility.speed if config.mobility.model == "random_waypoint" else None
        self.mobility = RandomWaypoint(initial, config.area_x, config.area_y, speed, config.mobility.pause, node_rngs)
        self.sim = Simulator(trace=trace)
        self.counters = Counters()
        self.audit: Optional[List[tuple]] = [] if audit else None
        self.medium = Medium(
            self.sim, self.mobility, config.radio, loss_rng, self._on_receive, self._on_transmit, self._on_drop
        )
        self.ttl = config.ttl
        self.agents: List[RoutingAgent] = [self._make_agent(i) for i in range(n)]
        self.flows = build_flows(config, traffic_rng)
        self._uid = 0
        self._live: Dict[int, DataPacket] = {}
        self.sources = [CbrSource(f, self.sim, self._originate, self._next_uid) for f in self.flows]

    def _make_agent(self, i: int) -> RoutingAgent:
        pc = self.config.protocol_config()
        proto = self.config.protocol
        if proto == "dsdv":
            return DsdvAgent(i, self, pc)
        if proto == "fsr":
            return FsrAgent(i, self, pc, self.n)
        return OlsrAgent(i, self, pc, self.n)

    # services used by agents

    @property
    def now(self) -> float:
        return self.sim.now

    def periodic(self, node: int, interval: float, fn: Callable) -> None:
        """Call ``fn`` at interval, 2*interval, ... (no drift)."""
        sim = self.sim
        k = 1

        def tick(_):
            nonlocal k
            k += 1
            sim.schedule(k * interval, TIMER, node, tick)
            fn()

        sim.schedule(interval, TIMER, node, tick)

    def at(self, node: int, t: float, fn: Callable):
        return self.sim.schedule(t, TIMER, node, fn)

    def cancel(self, handle) -> None:
        self.sim.cancel(handle)

    def broadcast(self, node: int, packet, label: str, relay_of: Optional[int] = None) -> bool:
        if self.audit is not None and relay_of is not None:
            agent = self.agents[node]
            ok = relay_of in getattr(agent, "mpr_selectors", ())
            self.audit.append((self.now, "relay-check", node, label, 0, relay_of, packet.origin, packet.sequence, int(ok)))
        frame = Frame(packet, label, None, packet.size, False)
        c = self.counters
        if not self.medium.enqueue(node, frame):
            c.control_queue_drops += 1
            return False
        # counted when handed to the interface, like a routing-layer send trace
        c.control_tx += 1
        c.tx_by_label[label] += 1
        if self.audit is not None:
            seq = getattr(packet, "sequence", -1)
            self.audit.append((self.now, "send", node, label, packet.size, -1, packet.origin, seq, 0))
        return True

    def count(self, name: str, k: int = 1) -> None:
        self.counters.events[name] += k

    def trace_tc(self, node: int, tc: TcMessage) -> None:
        if self.audit is not None:
            self.audit.append((self.now, "tc-rx", node, "olsr-tc", tc.size, -1, tc.origin, tc.sequence, 0))

    # medium callbacks

    def _on_transmit(self, node: int, frame: Frame, receivers) -> None:
        if frame.is_data:
            return
        if self.audit is not None:
            pkt = frame.packet
            origin = getattr(pkt, "origin", node)
            seq = getattr(pkt, "sequence", -1)
            self.audit.append((self.now, "tx", node, frame.label, frame.size, -1, origin, seq, len(receivers)))

    def _on_receive(self, node: int, frame: Frame, sender: int) -> None:
        if frame.is_data:
            self._handle_data(node, frame.packet)
        else:
            self.agents[node].receive(frame.packet, sender)

    def _on_drop(self, node: int, frame: Frame, cause: str) -> None:
        if frame.is_data:
            self._drop(node, frame.packet, cause)

    # data path

    def _next_uid(self) -> int:
        self._uid += 1
        return self._uid

    def _originate(self, pkt: DataPacket) -> None:
        self.counters.generated += 1
        self._live[pkt.uid] = pkt
        if self.audit is not None:
            self.audit.append((self.now, "gen", pkt.source, "data", pkt.size, pkt.destination, pkt.source, pkt.uid, 0))
        self._handle_data(pkt.source, pkt)

    def _handle_data(self, node: int, pkt: DataPacket) -> None:
        agent = self.agents[node]
        dest = pkt.destination
        nh = agent.next_hop(dest) if dest != node and pkt.hops_traversed < self.ttl else None
        outcome = forward_data(node, pkt, nh, self.ttl)
        if outcome == FORWARDED:
            agent.note_route_used(dest)
            if not self.medium.enqueue(node, Frame(pkt, "data", nh, pkt.size, True)):
                self._drop(node, pkt, DROP_QUEUE)
        elif outcome == DELIVERED:
            c = self.counters
            delay = self.now - pkt.created_at
            c.delivered += 1
            c.delivered_bytes += pkt.size
            c.delay_sum += delay
            del self._live[pkt.uid]
            if self.audit is not None:
                self.audit.append((self.now, "deliver", node, "data", pkt.size, pkt.source, pkt.source, pkt.uid, delay))
        else:
            self._drop(node, pkt, outcome)

    def _drop(self, node: int, pkt: DataPacket, cause: str) -> None:
        self.counters.drops[cause] += 1
        del self._live[pkt.uid]
        if self.audit is not None:
            self.audit.append((self.now, "drop", node, cause, pkt.size, pkt.destination, pkt.source, pkt.uid, 0))

    # execution

    def start(self) -> None:
        for agent in self.agents:
            agent.start()
        for src in self.sources:
            src.start()

    def run(self) -> RunResult:
        self.start()
        self.sim.run_until(self.config.sim_time)
        return self.result()

    def in_flight_census(self) -> int:
        """Data packets still queued or on air, counted from the queues and event list."""
        queued = self.medium.queued_data()
        on_air = sum(
            len(ev.payload[0])
            for ev in self.sim.pending_events()
            if ev.kind == PACKET_DELIVERY and ev.payload[1].is_data
        )
        return queued + on_air

    def result(self) -> RunResult:
        c = self.counters
        report = compute_metrics(
            c.delivered, c.delivered_bytes, c.delay_sum, c.generated, c.control_tx, self.config.sim_time, c.drops
        )
        return RunResult(self.config, c, report, len(self._live), self.audit, self.sim.trace)


def run_network(
    config: ScenarioConfig, audit: bool = False, trace: bool = False, positions: Optional[np.ndarray] = None
) -> RunResult:
    return Network(config, audit=audit, trace=trace, positions=positions).run()


def next_hop_graph(agents, destination: int) -> Dict[int, Tuple[int, int]]:
    """``node -> (next_hop, sequence)`` for every valid route to ``destination``."""
    out = {}
    for a in agents:
        if a.node == destination:
            continue
        e = a.routes().get(destination)
        if e is not None:
            out[a.node] = (e.next_hop, e.sequence)
    return out
