import math
import random

import numpy as np
import pytest

from pmanet.config import ScenarioConfig, preset
from pmanet.network import Network, next_hop_graph
from pmanet.routing.common import INFINITY, RouteEntry
from pmanet.routing.dsdv import DsdvAgent, DsdvUpdate

from conftest import StubNet


def _agent(node=0, **overrides):
    net = StubNet()
    return DsdvAgent(node, net, preset("dsdv", "original", **overrides)), net


def _install(agent, dest, via, metric, seq):
    agent.table[dest] = RouteEntry(dest, via, metric, seq, 0.0)
    agent.advertised[dest] = (metric, seq)


def test_quiet_update_carries_only_own_entry():
    a, _ = _agent()
    a.periodic_update()
    up = a.periodic_update()
    assert up.entries == ((0, 0, a.seq),)
    assert not up.full_dump


def test_many_changes_force_full_dump():
    a, _ = _agent(npdu_capacity=3)
    for d in range(1, 6):
        _install(a, d, 1, 2, 10)
    up = a.periodic_update()
    assert up.full_dump
    assert len(up.entries) == 6


def test_own_sequence_steps_by_two():
    a, _ = _agent()
    a.seq = 4
    up = a.periodic_update()
    assert up.entries[0] == (0, 0, 6)


def test_newer_sequence_wins_even_with_worse_metric():
    a, _ = _agent()
    _install(a, 9, 1, 3, 10)
    a.receive(DsdvUpdate(2, ((2, 0, 2), (9, 5, 12))), via=2)
    e = a.table[9]
    assert (e.next_hop, e.sequence, e.metric) == (2, 12, 6)


def test_equal_sequence_better_metric_is_adopted():
    a, _ = _agent()
    _install(a, 9, 1, 3, 10)
    a.receive(DsdvUpdate(2, ((2, 0, 2), (9, 1, 10))), via=2)
    e = a.table[9]
    assert (e.next_hop, e.sequence, e.metric) == (2, 10, 2)


def test_odd_sequence_invalidates_and_raises_trigger_for_active_route():
    a, net = _agent()
    _install(a, 9, 1, 3, 10)
    a.note_route_used(9)
    a.receive(DsdvUpdate(1, ((1, 0, 2), (9, INFINITY, 11))), via=1)
    assert not a.table[9].valid
    assert a.next_hop(9) is None
    assert "dsdv-trigger" in net.labels()


def test_settling_delays_advertisement_of_equal_sequence_improvement():
    a, _ = _agent(settling_count=3)
    _install(a, 9, 1, 4, 10)
    for _ in range(2):
        a.receive(DsdvUpdate(2, ((2, 0, 2), (9, 1, 10))), via=2)
        assert a.advertised[9] == (4, 10)
        assert a.next_hop(9) == 2  # already used for forwarding
    a.receive(DsdvUpdate(2, ((2, 0, 2), (9, 1, 10))), via=2)
    assert a.advertised[9] == (2, 10)


def test_malformed_update_is_dropped():
    a, net = _agent()
    assert a.receive(DsdvUpdate(2, ((9, -1, 10),)), via=2) == []
    assert a.malformed == 1 and 9 not in a.table


def test_break_on_active_route_triggers_immediately():
    a, net = _agent()
    _install(a, 9, 1, 2, 10)
    a.note_route_used(9)
    assert a.on_link_break(1) is True
    assert net.labels() == ["dsdv-trigger"]
    assert a.table[9].sequence == 11 and not a.table[9].valid


def test_break_on_idle_route_does_not_trigger():
    a, net = _agent()
    _install(a, 9, 1, 2, 10)
    assert a.on_link_break(1) is False
    assert net.labels() == []
    assert not a.table[9].valid


def test_trigger_spacing_suppresses_close_breaks():
    a, net = _agent(trigger_update_time=30.0)
    _install(a, 8, 1, 2, 10)
    _install(a, 9, 2, 2, 10)
    a.note_route_used(8)
    a.note_route_used(9)
    a.on_link_break(1)
    net.sim.run_until(5.0)
    a.note_route_used(9)
    a.on_link_break(2)
    assert net.labels().count("dsdv-trigger") == 1
    net.sim.run_until(29.9)
    assert net.labels().count("dsdv-trigger") == 1
    net.sim.run_until(30.0)
    assert net.labels().count("dsdv-trigger") == 2


def test_modified_preset_trigger_budget_under_forced_breaks():
    """One forced active break per second for 120 s."""
    net = StubNet()
    cfg = preset("dsdv", "modified")
    a = DsdvAgent(0, net, cfg)
    span = 120
    for k in range(span):
        net.sim.run_until(float(k))
        dest = 100 + k
        _install(a, dest, 1 + k, 2, 10)
        a.note_route_used(dest)
        a.on_link_break(1 + k)
    # triggers inside the half-open window [0, span)
    net.sim.run_until(span - 1e-9)
    assert net.labels().count("dsdv-trigger") <= math.ceil(span / cfg.trigger_update_time)


# table-driven reference of the update rules


def oracle_apply(table, dest, metric, seq, via):
    """table: dest -> (seq, metric, next_hop, valid)."""
    cur = table.get(dest)
    if seq % 2 == 1 or metric == INFINITY:
        if cur is not None and seq > cur[0]:
            table[dest] = (seq, INFINITY, cur[2], False)
        return
    cand = metric + 1
    if cur is None:
        table[dest] = (seq, cand, via, True)
    elif not cur[3]:
        if seq > cur[0]:
            table[dest] = (seq, cand, via, True)
    elif seq > cur[0] or (seq == cur[0] and cand < cur[1]):
        table[dest] = (seq, cand, via, True)


@pytest.mark.parametrize("seed", range(20))
def test_update_rules_match_reference_on_four_node_chain(seed):
    """Node b of chain a-b-c-d hears scripted updates from a and c."""
    rng = random.Random(seed)
    a_, b, c, d = 0, 1, 2, 3
    agent = DsdvAgent(b, StubNet(), preset("dsdv", "original"))
    ref = {}
    seqs = {a_: 0, c: 0, d: 0}
    for _ in range(60):
        via = rng.choice([a_, c])
        entries = []
        for dest in (a_, c, d):
            if dest == via:
                seqs[dest] += 2
                entries.append((dest, 0, seqs[dest]))
            elif rng.random() < 0.6:
                roll = rng.random()
                s = seqs[dest] + rng.choice([-2, 0, 0, 2])
                s = max(s, 0)
                if roll < 0.15:
                    entries.append((dest, INFINITY, s + 1))
                else:
                    entries.append((dest, rng.randint(1, 4), s))
                seqs[dest] = max(seqs[dest], s)
        agent.receive(DsdvUpdate(via, tuple(entries)), via=via)
        for dest, metric, seq in entries:
            oracle_apply(ref, dest, metric, seq, via)
        got = {k: (e.sequence, e.metric, e.next_hop, e.valid) for k, e in agent.table.items()}
        want = {k: v for k, v in ref.items()}
        for k in want:
            if not want[k][3]:
                assert not got[k][3] and got[k][0] == want[k][0]
            else:
                assert got[k] == want[k]


def _has_cycle(graph):
    for start in graph:
        seen = set()
        node = start
        while node in graph:
            if node in seen:
                return True
            seen.add(node)
            node = graph[node][0]
    return False


def equal_sequence_subgraph(graph, dest):
    """Keep edges u -> v where v's entry for ``dest`` carries u's sequence (or v is ``dest``)."""
    return {u: (v, s) for u, (v, s) in graph.items() if v == dest or (v in graph and graph[v][1] == s)}


def test_small_mobile_run_is_loop_free():
    cfg = ScenarioConfig(protocol="dsdv", nodes=12, sim_time=60.0, seed=5, area_x=600.0, area_y=600.0)
    cfg.traffic.num_flows = 4
    net = Network(cfg)
    violations = []

    def check(ev):
        for dest in range(cfg.nodes):
            g = equal_sequence_subgraph(next_hop_graph(net.agents, dest), dest)
            if _has_cycle(g):
                violations.append((ev.fire_at, dest))

    net.start()
    for t in np.arange(1.0, 60.01, 1.0):
        net.sim.run_until(float(t))
        check(type("E", (), {"fire_at": t}))
    assert violations == []
