"""Destination-Sequenced Distance Vector.

Sequence numbers are even while the destination is reachable and odd once a
break has been reported. A fresher sequence number is installed and
advertised at once. A shorter route carrying the same sequence number is
installed for forwarding straight away but only advertised after it has been
seen ``settling_count`` times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..config import DsdvConfig
from .common import INFINITY, RouteEntry, RoutingAgent

HEADER_BYTES = 28
ENTRY_BYTES = 12

Advert = Tuple[float, int]  # (metric, sequence)


@dataclass(frozen=True)
class DsdvUpdate:
    origin: int
    entries: Tuple[Tuple[int, float, int], ...]
    full_dump: bool = False

    @property
    def size(self) -> int:
        return HEADER_BYTES + ENTRY_BYTES * len(self.entries)


@dataclass
class SettlingRecord:
    destination: int
    best_candidate: RouteEntry
    first_seen: float
    samples: int = 1


class MalformedUpdate(ValueError):
    pass


class DsdvAgent(RoutingAgent):
    name = "dsdv"

    def __init__(self, node: int, net, cfg: DsdvConfig) -> None:
        super().__init__(node, net, cfg.loss_threshold)
        self.cfg = cfg
        self.seq = 0
        self.table: Dict[int, RouteEntry] = {}
        self.advertised: Dict[int, Advert] = {}
        self._last_sent: Dict[int, Advert] = {}
        self.settling: Dict[int, SettlingRecord] = {}
        self.last_used: Dict[int, float] = {}
        self.last_trigger = -math.inf
        self._trigger_pending = None
        self.malformed = 0

    # timers

    def start(self) -> None:
        self.net.periodic(self.node, self.cfg.periodic_interval, self.periodic_update)

    def periodic_update(self, _=None) -> DsdvUpdate:
        for nb in self.monitor.link_interval_tick():
            self.on_link_break(nb)
        self.seq += 2
        update = self._build_update()
        if self._trigger_pending is not None:
            self.net.cancel(self._trigger_pending)
            self._trigger_pending = None
        self.net.broadcast(self.node, update, "dsdv-periodic")
        return update

    def _build_update(self) -> DsdvUpdate:
        changed = [d for d in sorted(self.advertised) if self._last_sent.get(d) != self.advertised[d]]
        full = len(changed) > self.cfg.npdu_capacity
        dests = sorted(self.advertised) if full else changed
        entries = [(self.node, 0, self.seq)]
        for d in dests:
            m, s = self.advertised[d]
            entries.append((d, m, s))
            self._last_sent[d] = (m, s)
        return DsdvUpdate(self.node, tuple(entries), full)

    # reception

    def receive(self, update: DsdvUpdate, via: int) -> List[int]:
        """Apply ``update`` heard from neighbour ``via``; returns destinations whose installed route changed."""
        for _, metric, seq in update.entries:
            if metric < 0 or seq < 0:
                self.malformed += 1
                self.net.count("dsdv-malformed")
                return []
        self.monitor.note_control_heard(via, self.net.now)
        changed = []
        for dest, metric, seq in update.entries:
            if dest == self.node:
                if seq >= self.seq:
                    # someone holds a newer (possibly odd) number for us
                    self.seq = (seq // 2 + 1) * 2
                continue
            if self._consider(dest, metric, seq, via):
                changed.append(dest)
        return changed

    def _consider(self, dest: int, metric: float, seq: int, via: int) -> bool:
        now = self.net.now
        cur = self.table.get(dest)
        if seq % 2 == 1 or metric == INFINITY:
            if cur is None or seq <= cur.sequence:
                return False
            was_valid = cur.valid
            cur.sequence = seq
            cur.metric = INFINITY
            cur.valid = False
            cur.installed_at = now
            if was_valid:
                self._invalidate_advert(dest, seq)
                if self._is_active(dest):
                    self.request_trigger()
            return was_valid
        cand = metric + 1
        if cur is None or not cur.valid or seq > cur.sequence:
            if cur is not None and not cur.valid and seq <= cur.sequence:
                return False
            entry = RouteEntry(dest, via, cand, seq, now)
            self.table[dest] = entry
            self._advertise(dest, entry)
            return True
        if seq < cur.sequence:
            return False
        if cand < cur.metric:
            entry = RouteEntry(dest, via, cand, seq, now)
            self.table[dest] = entry
            self._settle(dest, entry)
            return True
        if cand == cur.metric and via == cur.next_hop:
            self._settle(dest, cur)
        return False

    def _settle(self, dest: int, entry: RouteEntry) -> None:
        """Count one more sighting of an equal-sequence improvement."""
        rec = self.settling.get(dest)
        cand = rec.best_candidate if rec else None
        if cand is None:
            if self.advertised.get(dest) == (entry.metric, entry.sequence):
                return
            rec = SettlingRecord(dest, entry, self.net.now)
            self.settling[dest] = rec
        elif cand.next_hop == entry.next_hop and cand.metric == entry.metric and cand.sequence == entry.sequence:
            rec.samples += 1
        else:
            rec = SettlingRecord(dest, entry, self.net.now)
            self.settling[dest] = rec
        if rec.samples >= self.cfg.settling_count:
            self._advertise(dest, entry)

    def _advertise(self, dest: int, entry: RouteEntry) -> None:
        self.advertised[dest] = (entry.metric, entry.sequence)
        self.settling.pop(dest, None)

    def _invalidate_advert(self, dest: int, seq: int) -> None:
        self.advertised[dest] = (INFINITY, seq)
        self.settling.pop(dest, None)

    # link breaks and triggers

    def _is_active(self, dest: int) -> bool:
        used = self.last_used.get(dest)
        return used is not None and used >= self.net.now - self.cfg.periodic_interval

    def on_link_break(self, broken: int) -> bool:
        """Invalidate every route through ``broken``; True if a trigger was requested."""
        active = False
        for dest in sorted(self.table):
            e = self.table[dest]
            if e.valid and e.next_hop == broken:
                e.sequence += 1
                e.metric = INFINITY
                e.valid = False
                e.installed_at = self.net.now
                self._invalidate_advert(dest, e.sequence)
                active = active or self._is_active(dest)
        self.net.count("dsdv-link-break")
        if active:
            self.net.count("dsdv-active-break")
            self.request_trigger()
        return active

    def request_trigger(self) -> None:
        now = self.net.now
        due = self.last_trigger + self.cfg.trigger_update_time
        if now >= due:
            self._send_trigger()
        elif self._trigger_pending is None:
            self.net.count("dsdv-trigger-deferred")
            self._trigger_pending = self.net.at(self.node, due, self._deferred_trigger)

    def _deferred_trigger(self, _=None) -> None:
        self._trigger_pending = None
        self._send_trigger()

    def _send_trigger(self) -> None:
        self.last_trigger = self.net.now
        self.seq += 2
        self.net.broadcast(self.node, self._build_update(), "dsdv-trigger")

    # forwarding

    def next_hop(self, destination: int) -> Optional[int]:
        e = self.table.get(destination)
        if e is None or not e.valid:
            return None
        return e.next_hop

    def note_route_used(self, destination: int) -> None:
        self.last_used[destination] = self.net.now

    def routes(self) -> Dict[int, RouteEntry]:
        return {d: e for d, e in self.table.items() if e.valid}
