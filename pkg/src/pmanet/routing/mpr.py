"""Greedy multipoint-relay selection."""
from __future__ import annotations

from typing import AbstractSet, Dict, Mapping, Set


class MprConsistencyError(ValueError):
    """A two-hop node has no one-hop neighbour reaching it."""


def select_mprs(one_hop: AbstractSet[int], two_hop: Mapping[int, AbstractSet[int]]) -> Set[int]:
    """Pick a subset of ``one_hop`` covering every key of ``two_hop``.

    ``two_hop`` maps each strict two-hop neighbour to the one-hop neighbours
    that reach it. Neighbours that are the only way to reach some two-hop
    node are taken first; after that the neighbour covering the most still
    uncovered nodes is added (lowest id on ties) until everything is covered.
    """
    coverage: Dict[int, Set[int]] = {nb: set() for nb in one_hop}
    for target, reachers in two_hop.items():
        usable = [r for r in reachers if r in coverage]
        if not usable:
            raise MprConsistencyError(f"two-hop node {target} has no reaching one-hop neighbour")
        for r in usable:
            coverage[r].add(target)

    mprs: Set[int] = set()
    for reachers in two_hop.values():
        usable = [r for r in reachers if r in coverage]
        if len(usable) == 1:
            mprs.add(usable[0])

    uncovered = set(two_hop)
    for m in mprs:
        uncovered -= coverage[m]

    candidates = sorted(set(coverage) - mprs)
    while uncovered:
        best, best_gain = -1, 0
        for nb in candidates:
            gain = len(coverage[nb] & uncovered)
            if gain > best_gain:
                best, best_gain = nb, gain
        # cannot stall: every uncovered node has a reacher among the candidates
        mprs.add(best)
        candidates.remove(best)
        uncovered -= coverage[best]
    return mprs


def covers(mprs: AbstractSet[int], two_hop: Mapping[int, AbstractSet[int]]) -> bool:
    return all(reachers & mprs for reachers in (set(r) for r in two_hop.values()))
