"""Wrap-aware phase arithmetic."""

import math

from hypothesis import given, settings, strategies as st

from beepsim.phases import PhaseSet, from_global, in_range, lift_onto, to_global, wrap_distance


def make(values, tau=10):
    return PhaseSet.from_iterable(values, tau)


def test_range_query_plain():
    s = make({1, 5, 9})
    assert tuple(s.range_query(4, 6)) == (5,)


def test_range_query_wraps_through_boundary():
    s = make({1, 5, 9})
    assert tuple(s.range_query(8, 2)) == (1, 9)


def test_range_query_empty_set():
    assert make(set()).range_query(0, 9).is_empty


def test_range_query_full_range_is_identity():
    s = make({0, 3, 7, 9.5})
    assert tuple(s.range_query(0, math.nextafter(10, 0))) == tuple(s)


def test_endpoints_are_inclusive():
    s = make({2, 6})
    assert 2 in s.range_query(2, 3)
    assert 6 in s.range_query(5, 6)


def test_negative_and_oversized_endpoints_reduce():
    s = make({1, 5, 9})
    assert tuple(s.range_query(-2, 12)) == (1, 9)  # [8, 2] after reduction


def test_to_global_examples():
    assert to_global(3, 5, 16) == 8
    assert to_global(0, 0, 16) == 0
    assert to_global(10, 10, 16) == 4


def test_wrap_distance():
    assert wrap_distance(0, 15, 16) == 1
    assert wrap_distance(3, 3, 16) == 0
    assert wrap_distance(2, 10, 16) == 8


def test_lift_onto():
    assert lift_onto(-2.5, 8.0, 10.0) == -2.0
    assert lift_onto(4, 1, 10) == 11


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=2, max_value=24).flatmap(
        lambda q: st.tuples(
            st.just(q),
            st.sets(st.integers(min_value=0, max_value=q - 1), max_size=q),
            st.integers(min_value=-q, max_value=2 * q),
            st.integers(min_value=-q, max_value=2 * q),
        )
    )
)
def test_partition_property(case):
    # range [a, b] and its circular complement [b+1, a-1] split S exactly,
    # provided the complement is not degenerate.
    q, values, a, b = case
    if (b + 1) % q == a % q:
        return
    s = make(values, q)
    left = set(s.range_query(a, b))
    right = set(s.range_query(b + 1, a - 1))
    assert left | right == set(s)
    assert not (left & right)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=1, max_value=64),
    st.integers(min_value=0, max_value=63),
    st.integers(min_value=0, max_value=63),
)
def test_to_global_round_trip(q, p, theta):
    p %= q
    theta %= q
    g = to_global(p, theta, q)
    assert 0 <= g < q
    assert from_global(g, theta, q) == p
    # applying the inverse offset undoes the map
    assert to_global(g, q - theta, q) == p


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=2, max_value=32).flatmap(
        lambda q: st.tuples(
            st.just(q),
            st.sets(st.integers(min_value=0, max_value=q - 1), max_size=8),
            st.integers(min_value=0, max_value=q - 1),
            st.integers(min_value=0, max_value=q - 1),
            st.integers(min_value=0, max_value=q - 1),
        )
    )
)
def test_in_range_matches_range_query(case):
    q, values, a, b, probe = case
    s = make(values, q)
    assert (probe in set(s.range_query(a, b))) == (
        probe in values and in_range(probe, a, b, q)
    )
