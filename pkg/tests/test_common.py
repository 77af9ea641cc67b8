import pytest

from pmanet.routing.common import (
    DELIVERED,
    DROP_NOROUTE,
    DROP_TTL,
    FORWARDED,
    DataPacket,
    LinkMonitor,
    forward_data,
)


def test_first_contact_brings_link_up():
    m = LinkMonitor(0)
    assert m.note_control_heard(1, 0.5) is True
    assert m.up == {1}


def test_known_neighbour_resets_misses_without_event():
    m = LinkMonitor(0)
    m.note_control_heard(1, 0.0)
    m.link_interval_tick()
    m.link_interval_tick()
    assert m.links[1].misses == 1  # heard during the first interval only
    assert m.note_control_heard(1, 3.0) is False
    assert m.links[1].misses == 0


def test_hearing_self_is_rejected():
    with pytest.raises(ValueError):
        LinkMonitor(4).note_control_heard(4, 0.0)


def test_silent_for_threshold_intervals_breaks_once():
    m = LinkMonitor(0, loss_threshold=3)
    m.note_control_heard(1, 0.0)
    assert m.link_interval_tick() == []  # heard in this interval
    assert m.link_interval_tick() == []
    assert m.link_interval_tick() == []
    assert m.link_interval_tick() == [1]
    assert m.link_interval_tick() == []  # edge-triggered
    assert not m.is_up(1)


def test_heard_mid_interval_keeps_misses_at_zero():
    m = LinkMonitor(0)
    for k in range(5):
        m.note_control_heard(1, float(k))
        assert m.link_interval_tick() == []
        assert m.links[1].misses == 0


def test_broken_link_comes_back_when_heard():
    m = LinkMonitor(0, loss_threshold=1)
    m.note_control_heard(2, 0.0)
    m.link_interval_tick()
    assert m.link_interval_tick() == [2]
    assert m.note_control_heard(2, 5.0) is True


def test_forwarding_decisions():
    pkt = DataPacket(0, 3, 64, 0.0)
    assert forward_data(1, pkt, 2) == FORWARDED
    assert pkt.hops_traversed == 1
    assert forward_data(1, DataPacket(0, 3, 64, 0.0), None) == DROP_NOROUTE
    assert forward_data(1, DataPacket(0, 3, 64, 0.0, hops_traversed=32), 2, ttl=32) == DROP_TTL
    assert forward_data(3, DataPacket(0, 3, 64, 0.0), None) == DELIVERED
