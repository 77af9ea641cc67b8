"""Contention-free broadcast medium.

Every node serialises its own transmissions through a bounded drop-tail FIFO;
a frame occupies the transmitter for ``size * 8 / bandwidth`` seconds and
reaches each in-range node ``per_hop_processing_delay`` later. Receivers are
fixed at the moment transmission starts, and one delivery event carries the
frame to all of them.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Deque, List, Optional

import numpy as np

from .kernel import PACKET_DELIVERY, TIMER, Simulator


@dataclass
class RadioModel:
    range: float = 250.0
    bandwidth: float = 2_000_000.0
    per_hop_processing_delay: float = 0.001
    loss_probability: float = 0.0
    queue_capacity: int = 50

    def validate(self) -> None:
        if not self.range > 0:
            raise ValueError("radio range must be > 0")
        if not self.bandwidth > 0:
            raise ValueError("radio bandwidth must be > 0")
        if self.per_hop_processing_delay < 0:
            raise ValueError("processing delay must be >= 0")
        if not 0.0 <= self.loss_probability <= 1.0:
            raise ValueError("loss probability must lie in [0, 1]")
        if self.queue_capacity < 1:
            raise ValueError("queue capacity must be >= 1")

    def transmission_delay(self, size_bytes: int) -> float:
        return size_bytes * 8 / self.bandwidth


class Frame:
    __slots__ = ("packet", "label", "dest", "size", "is_data")

    def __init__(self, packet, label: str, dest: Optional[int], size: int, is_data: bool) -> None:
        self.packet = packet
        self.label = label
        self.dest = dest
        self.size = size
        self.is_data = is_data


class Medium:
    """Shared radio channel for all nodes of one run.

    ``on_receive(node, frame, sender)`` is invoked for every delivery,
    ``on_transmit(node, frame, receivers)`` when a frame goes on air and
    ``on_drop(node, frame, cause)`` when a data frame is lost before reception.
    """

    def __init__(
        self,
        sim: Simulator,
        mobility,
        radio: RadioModel,
        loss_rng: np.random.Generator,
        on_receive: Callable,
        on_transmit: Callable,
        on_drop: Callable,
    ) -> None:
        self.sim = sim
        self.mobility = mobility
        self.radio = radio
        self.loss_rng = loss_rng
        self.on_receive = on_receive
        self.on_transmit = on_transmit
        self.on_drop = on_drop
        n = mobility.n
        self.queues: List[Deque[Frame]] = [deque() for _ in range(n)]
        self.busy_until = [0.0] * n
        self._wake_pending = [False] * n
        self._bits_per_sec = radio.bandwidth
        self._proc = radio.per_hop_processing_delay

    def neighbors(self, node: int, t: Optional[float] = None) -> List[int]:
        return self.mobility.in_range(node, self.sim.now if t is None else t, self.radio.range)

    def enqueue(self, node: int, frame: Frame) -> bool:
        """Queue ``frame`` at ``node``; False when the queue is full."""
        q = self.queues[node]
        if not q and self.sim.now >= self.busy_until[node]:
            self._transmit(node, frame)
            return True
        if len(q) >= self.radio.queue_capacity:
            return False
        q.append(frame)
        if not self._wake_pending[node]:
            self._wake_pending[node] = True
            self.sim.schedule(self.busy_until[node], TIMER, node, self._wake, node)
        return True

    def _wake(self, node: int) -> None:
        q = self.queues[node]
        self._transmit(node, q.popleft())
        if q:
            self.sim.schedule(self.busy_until[node], TIMER, node, self._wake, node)
        else:
            self._wake_pending[node] = False

    def _transmit(self, node: int, frame: Frame) -> None:
        sim = self.sim
        now = sim.now
        dur = frame.size * 8 / self._bits_per_sec
        self.busy_until[node] = now + dur
        arrive = now + dur + self._proc
        receivers = self.mobility.in_range(node, now, self.radio.range)
        loss = self.radio.loss_probability
        if frame.dest is None:
            targets = receivers
            if loss > 0.0 and targets:
                keep = self.loss_rng.random(len(targets)) >= loss
                targets = [r for r, k in zip(targets, keep) if k]
        else:
            ok = frame.dest in receivers
            if ok and loss > 0.0:
                ok = self.loss_rng.random() >= loss
            targets = [frame.dest] if ok else []
        self.on_transmit(node, frame, targets)
        if frame.dest is not None and not targets:
            self.on_drop(node, frame, "link")
        if targets:
            # one event per transmission; receivers are served in id order,
            # exactly as separate same-time events with consecutive sequence numbers
            sim.schedule(arrive, PACKET_DELIVERY, node, self._deliver, (targets, frame, node))

    def _deliver(self, payload) -> None:
        targets, frame, sender = payload
        on_receive = self.on_receive
        for r in targets:
            on_receive(r, frame, sender)

    def queued_data(self) -> int:
        return sum(1 for q in self.queues for f in q if f.is_data)
