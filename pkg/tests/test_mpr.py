from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmanet.routing.mpr import MprConsistencyError, covers, select_mprs


def brute_force_minimum(one_hop, two_hop):
    nbrs = sorted(one_hop)
    for k in range(len(nbrs) + 1):
        for subset in combinations(nbrs, k):
            if covers(set(subset), two_hop):
                return k
    raise AssertionError("no cover")


@st.composite
def neighbourhoods(draw, max_one=12, max_two=16):
    n1 = draw(st.integers(0, max_one))
    one = set(range(1, n1 + 1))
    n2 = draw(st.integers(0, max_two)) if one else 0
    two = {}
    for t in range(100, 100 + n2):
        reachers = draw(st.sets(st.sampled_from(sorted(one)), min_size=1, max_size=len(one)))
        two[t] = reachers
    return one, two


def test_nothing_to_cover_gives_empty_set():
    assert select_mprs({1, 2, 3}, {}) == set()


def test_single_neighbour_reaching_everything_is_chosen_alone():
    assert select_mprs({1, 2, 3}, {10: {2}, 11: {2}, 12: {2}}) == {2}


def test_sole_reachers_are_forced():
    assert select_mprs({1, 2, 3}, {10: {1}, 11: {1, 2, 3}, 12: {3}}) == {1, 3}


def test_ties_go_to_lower_id():
    assert select_mprs({4, 2}, {10: {2, 4}, 11: {2, 4}}) == {2}


def test_unreachable_two_hop_node_is_an_error():
    with pytest.raises(MprConsistencyError):
        select_mprs({1}, {10: {7}})


@settings(max_examples=300, deadline=None)
@given(neighbourhoods())
def test_greedy_covers_and_stays_near_minimum(nb):
    one, two = nb
    mprs = select_mprs(one, two)
    assert mprs <= one
    assert covers(mprs, two)
    if len(one) <= 10:
        assert len(mprs) <= 2 * brute_force_minimum(one, two)


@settings(max_examples=300, deadline=None)
@given(neighbourhoods())
def test_list_kernels_agree_with_reference_selection(nb):
    from pmanet import _pykernels, kernels

    one, two = nb
    me = 0
    order = sorted(one)
    lists = [[me] + [t for t, r in two.items() if b in r] + [o for o in order if o != b][:2] for b in order]
    want = select_mprs(one, two)
    assert set(_pykernels.mpr_from_lists(me, order, lists, 200)) == want
    assert set(kernels.mpr_from_lists(me, order, lists, 200)) == want
