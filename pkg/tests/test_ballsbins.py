"""Occupancy oracle: exact distribution, brute-force cross-check, sampling."""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from beepsim.ballsbins import (
    amplification_rounds,
    bb_enumerate,
    bb_exact,
    bb_montecarlo,
    convergence_period_bound,
    escape_probability,
    stirling2_row,
)
from beepsim.errors import ConfigError


def brute_counts(m, n):
    """Count occupied bins over all n^m placements the slow, obvious way."""
    counts = {}
    for placement in itertools.product(range(n), repeat=m):
        z = len(set(placement))
        counts[z] = counts.get(z, 0) + 1
    return counts


def test_stirling_small_values():
    assert stirling2_row(4) == [0, 1, 7, 6, 1]
    assert stirling2_row(1) == [0, 1]


def test_single_ball():
    dist = bb_exact(1, 5)
    assert dist.pmf == {1: Fraction(1)}
    assert dist.expected == 1


def test_two_balls_two_bins_by_hand():
    # 4 placements: (0,0) (1,1) -> one bin; (0,1) (1,0) -> two bins.
    dist = bb_exact(2, 2)
    assert dist.pmf == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert dist.expected == Fraction(3, 2)


def test_zero_balls_degenerate():
    dist = bb_exact(0, 3)
    assert dist.pmf == {0: Fraction(1)}


def test_exact_matches_brute_force_grid():
    for m, n in [(2, 2), (3, 2), (3, 3), (4, 3), (5, 4), (6, 4), (4, 6), (7, 3)]:
        counts = brute_counts(m, n)
        dist = bb_exact(m, n)
        total = n**m
        assert dist.pmf == {k: Fraction(c, total) for k, c in counts.items()}


def test_enumerate_matches_brute_force():
    for m, n in [(3, 3), (5, 4), (2, 7)]:
        assert bb_enumerate(m, n) == brute_counts(m, n)


def test_enumerate_refuses_oversized():
    with pytest.raises(ConfigError):
        bb_enumerate(30, 10, limit=10**6)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.integers(min_value=1, max_value=7))
def test_exact_matches_enumeration(m, n):
    counts = bb_enumerate(m, n)
    dist = bb_exact(m, n)
    total = n**m
    assert dist.pmf == {k: Fraction(c, total) for k, c in counts.items()}


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=40), st.integers(min_value=1, max_value=40))
def test_expected_occupancy_closed_form(m, n):
    # E[occupied] = n * (1 - (1 - 1/n)^m), an independent derivation.
    dist = bb_exact(m, n)
    expected = Fraction(n) * (1 - (1 - Fraction(1, n)) ** m)
    assert dist.expected == expected


def test_occupancy_gate_at_twelve():
    dist = bb_exact(12, 12)
    assert dist.prob_greater(3) > Fraction(1, 2)
    assert dist.expected > 6


def test_montecarlo_agrees_with_exact():
    m, n, trials = 4, 6, 200_000
    dist = bb_exact(m, n)
    emp = bb_montecarlo(m, n, trials, seed=123)
    for k, p in dist.pmf.items():
        sigma = math.sqrt(float(p) * (1 - float(p)) / trials)
        assert abs(emp.get(k, 0.0) - float(p)) <= 4 * sigma


def test_montecarlo_is_seeded():
    assert bb_montecarlo(3, 5, 1000, seed=9) == bb_montecarlo(3, 5, 1000, seed=9)
    assert bb_montecarlo(3, 5, 1000, seed=9) != bb_montecarlo(3, 5, 1000, seed=10)


def test_montecarlo_zero_balls():
    assert bb_montecarlo(0, 4, 100, seed=1) == {0: 1.0}


def test_amplification_examples():
    assert amplification_rounds(2, 0.5, 1, 16) == pytest.approx(8 * math.log(16))
    assert amplification_rounds(1, 1.0, 0, math.e) == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        amplification_rounds(1, 0.0, 1, 16)
    with pytest.raises(ConfigError):
        amplification_rounds(1, 1.5, 1, 16)


def test_convergence_bound_plugs_in_eta():
    eta = 1.0 / 16.0
    p = escape_probability(eta)
    assert p == pytest.approx(0.5 * math.exp(-16 * eta / (1 - 3 * eta)))
    bound = convergence_period_bound(eta, 64)
    assert bound == pytest.approx((2 * 2 / p) * math.log(64))
    assert bound > 0
