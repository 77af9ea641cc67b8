"""Constant-bit-rate flows."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .config import ConfigError, ScenarioConfig
from .kernel import TRAFFIC_GENERATION, Simulator
from .routing.common import DataPacket


@dataclass(frozen=True)
class CbrFlow:
    source: int
    destination: int
    rate: float
    packet_size: int
    start_at: float
    stop_at: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("flow rate must be > 0")
        if self.source == self.destination:
            raise ValueError("flow source and destination must differ")

    @property
    def offered_load(self) -> float:
        """Offered load in bits per second."""
        return self.rate * self.packet_size * 8

    def send_times(self, horizon: float = float("inf")) -> List[float]:
        stop = min(self.stop_at, horizon)
        times = []
        k = 0
        while True:
            t = self.start_at + k / self.rate
            if t >= stop:
                return times
            times.append(t)
            k += 1


def build_flows(config: ScenarioConfig, rng: np.random.Generator) -> List[CbrFlow]:
    """Draw ``traffic.num_flows`` distinct ordered pairs uniformly without replacement."""
    n = config.nodes
    t = config.traffic
    if t.num_flows == 0:
        return []
    if n < 2:
        raise ConfigError("traffic needs at least two nodes")
    total = n * (n - 1)
    if t.num_flows > total:
        raise ConfigError(f"num_flows={t.num_flows} exceeds {total} ordered pairs")
    picks = rng.choice(total, size=t.num_flows, replace=False)
    starts = rng.uniform(0.0, t.stagger, size=t.num_flows) if t.stagger > 0 else np.zeros(t.num_flows)
    flows = []
    for idx, start in zip(picks, starts):
        src, off = divmod(int(idx), n - 1)
        dst = off if off < src else off + 1
        flows.append(CbrFlow(src, dst, t.rate, t.packet_size, float(start), config.sim_time))
    return flows


class CbrSource:
    """Schedules the packets of one flow and hands them to ``emit``."""

    def __init__(self, flow: CbrFlow, sim: Simulator, emit: Callable[[DataPacket], None], next_uid: Callable[[], int]):
        self.flow = flow
        self.sim = sim
        self.emit = emit
        self.next_uid = next_uid
        self.k = 0
        self.generated = 0

    def start(self) -> None:
        if self.flow.start_at < self.flow.stop_at:
            self.sim.schedule(self.flow.start_at, TRAFFIC_GENERATION, self.flow.source, self.cbr_tick)

    def cbr_tick(self, _=None) -> DataPacket:
        f = self.flow
        pkt = DataPacket(f.source, f.destination, f.packet_size, self.sim.now, 0, self.next_uid())
        self.generated += 1
        self.k += 1
        nxt = f.start_at + self.k / f.rate
        if nxt < f.stop_at:
            self.sim.schedule(nxt, TRAFFIC_GENERATION, f.source, self.cbr_tick)
        self.emit(pkt)
        return pkt
