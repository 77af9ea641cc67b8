"""Discrete-event engine.

Events are ordered by ``(fire_at, sequence)``; the sequence number is the
insertion order, so simultaneous events dispatch FIFO and every run with the
same inputs produces the same trace.

Queue entries are plain lists ``[fire_at, sequence, action, payload, kind,
target]``; the list doubles as the cancellation handle.
"""
from __future__ import annotations

import heapq
from typing import Any, Callable, List, NamedTuple, Optional, Tuple

PACKET_DELIVERY = "packet-delivery"
TIMER = "timer"
MOBILITY_UPDATE = "mobility-update"
TRAFFIC_GENERATION = "traffic-generation"

EVENT_KINDS = (PACKET_DELIVERY, TIMER, MOBILITY_UPDATE, TRAFFIC_GENERATION)


class SchedulingError(RuntimeError):
    """Raised when an event is scheduled before the current clock."""


class SimEvent(NamedTuple):
    fire_at: float
    sequence: int
    kind: str
    target: int
    payload: Any


def _cancelled(_payload) -> None:  # placeholder action of cancelled entries
    pass


class Simulator:
    """Single-threaded event queue with a monotone clock."""

    def __init__(self, trace: bool = False) -> None:
        self.now = 0.0
        self._queue: List[list] = []
        self._seq = 0
        self.dispatched = 0
        self.trace: Optional[List[Tuple[float, int, str, int]]] = [] if trace else None
        self.observers: List[Callable[[SimEvent], None]] = []

    def schedule(
        self,
        fire_at: float,
        kind: str,
        target: int,
        action: Optional[Callable[[Any], None]] = None,
        payload: Any = None,
    ) -> list:
        """Queue an event; the returned handle can be passed to :meth:`cancel`."""
        if fire_at < self.now:
            raise SchedulingError(f"cannot schedule at t={fire_at} (now={self.now})")
        entry = [fire_at, self._seq, action, payload, kind, target]
        self._seq += 1
        heapq.heappush(self._queue, entry)
        return entry

    def schedule_in(self, delay: float, kind: str, target: int, action=None, payload=None) -> list:
        return self.schedule(self.now + delay, kind, target, action, payload)

    @staticmethod
    def cancel(handle: list) -> None:
        handle[2] = _cancelled
        handle[4] = None

    @staticmethod
    def is_cancelled(handle: list) -> bool:
        return handle[4] is None

    def pending_events(self) -> List[SimEvent]:
        live = sorted(e for e in self._queue if e[4] is not None)
        return [SimEvent(e[0], e[1], e[4], e[5], e[3]) for e in live]

    def pending(self) -> int:
        return sum(1 for e in self._queue if e[4] is not None)

    def run_until(self, end: float) -> int:
        """Dispatch every event with ``fire_at <= end``; the clock ends at ``end``."""
        queue = self._queue
        trace = self.trace
        observers = self.observers
        pop = heapq.heappop
        count = 0
        while queue and queue[0][0] <= end:
            t, seq, action, payload, kind, target = pop(queue)
            if kind is None:
                continue
            self.now = t
            count += 1
            if trace is not None:
                trace.append((t, seq, kind, target))
            if action is not None:
                action(payload)
            if observers:
                ev = SimEvent(t, seq, kind, target, payload)
                for obs in observers:
                    obs(ev)
        if end > self.now:
            self.now = end
        self.dispatched += count
        return count
