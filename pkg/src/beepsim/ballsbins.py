"""Occupancy oracles for throwing m balls into n bins uniformly at random.

``bb_exact`` computes the distribution of the number of occupied bins in
exact integer arithmetic; ``bb_enumerate`` cross-checks it by counting all
n^m placements outright; ``bb_montecarlo`` samples it.  These back the
statistical arguments about how many distinct slots a node hears when its
uncolored neighbors jump to random free slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError
from .rng import stream


def stirling2_row(m: int) -> list[int]:
    """Stirling numbers of the second kind S(m, k) for k in 0..m."""
    row = [1] + [0] * m
    for i in range(1, m + 1):
        new = [0] * (m + 1)
        for k in range(1, i + 1):
            new[k] = k * row[k] + row[k - 1]
        row = new
    return row


@dataclass(frozen=True)
class OccupancyDistribution:
    """Exact pmf of the number of occupied bins."""

    m: int
    n: int
    pmf: dict[int, Fraction]

    @property
    def expected(self) -> Fraction:
        return sum((Fraction(k) * p for k, p in self.pmf.items()), Fraction(0))

    def prob_greater(self, threshold) -> Fraction:
        return sum((p for k, p in self.pmf.items() if k > threshold), Fraction(0))


def bb_exact(m: int, n: int) -> OccupancyDistribution:
    """Occupied-bin distribution via C(n,k) * k! * S(m,k) / n^m.

    m = 0 is handled as the degenerate "zero bins occupied" case.
    """
    if n < 1 or m < 0:
        raise ConfigError("need n >= 1 and m >= 0")
    if m == 0:
        return OccupancyDistribution(0, n, {0: Fraction(1)})
    s2 = stirling2_row(m)
    counts = {}
    for k in range(1, min(m, n) + 1):
        c = math.comb(n, k) * math.factorial(k) * s2[k]
        if c:
            counts[k] = c
    total = n**m
    if sum(counts.values()) != total:
        raise ConfigError(f"occupancy counts for m={m}, n={n} do not sum to n^m")
    return OccupancyDistribution(m, n, {k: Fraction(c, total) for k, c in counts.items()})


def bb_enumerate(m: int, n: int, limit: int = 10_000_000) -> dict[int, int]:
    """Exact occupied-bin counts by enumerating all n^m placements."""
    if n < 1 or m < 1:
        raise ConfigError("need n >= 1 and m >= 1")
    total = n**m
    if total > limit:
        raise ConfigError(f"n^m = {total} exceeds the enumeration limit {limit}")
    counts = np.zeros(min(m, n) + 1, dtype=np.int64)
    chunk = max(1, 1 << 19)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((idx.size, m), dtype=np.int32)
        rest = idx
        for j in range(m):
            digits[:, j] = rest % n
            rest = rest // n
        if m == 1:
            occ = np.ones(idx.size, dtype=np.int64)
        else:
            srt = np.sort(digits, axis=1)
            occ = (np.diff(srt, axis=1) != 0).sum(axis=1) + 1
        counts += np.bincount(occ, minlength=counts.size)
    return {k: int(c) for k, c in enumerate(counts) if c}


def bb_montecarlo(m: int, n: int, trials: int, seed: int) -> dict[int, float]:
    """Empirical occupied-bin pmf from independent uniform placements."""
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if m == 0:
        return {0: 1.0}
    rng = stream(seed, "ballsbins")
    counts = np.zeros(min(m, n) + 1, dtype=np.int64)
    chunk = max(1, int(2_000_000 // m))
    remaining = trials
    while remaining:
        c = min(chunk, remaining)
        draws = rng.integers(0, n, size=(c, m))
        if m == 1:
            occ = np.ones(c, dtype=np.int64)
        else:
            srt = np.sort(draws, axis=1)
            occ = (np.diff(srt, axis=1) != 0).sum(axis=1) + 1
        counts += np.bincount(occ, minlength=counts.size)
        remaining -= c
    return {k: c / trials for k, c in enumerate(counts) if c}


def amplification_rounds(c: float, p: float, q: float, n: float) -> float:
    """Periods until an event of per-c-period probability p has hit every node.

    Evaluates (c*(q+1)/p) * ln(n): enough periods that all n nodes succeed
    with probability 1 - 1/n^q.
    """
    if not 0.0 < p <= 1.0:
        raise ConfigError(f"probability p must lie in (0, 1], got {p}")
    if c < 1 or q < 0 or n < 2:
        raise ConfigError("need c >= 1, q >= 0, n >= 2")
    return (c * (q + 1) / p) * math.log(n)


def escape_probability(eta: float) -> float:
    """Lower bound on the chance an uncolored conflicted node settles in a period."""
    if not 0.0 < eta < 1.0 / 3.0:
        raise ConfigError("eta must lie in (0, 1/3)")
    return 0.5 * math.exp(-16.0 * eta / (1.0 - 3.0 * eta))


def convergence_period_bound(eta: float, n: float, c: float = 2.0, q: float = 1.0) -> float:
    """Concrete high-probability bound on periods until everyone settles."""
    return amplification_rounds(c, escape_probability(eta), q, n)
