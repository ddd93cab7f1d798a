"""Greedy first-fit phase claiming for the continuous engine.

A node listens for a random prefix, then for one full period, and then
scans forward for the first phase whose surrounding buffer is clear of
every beep heard so far, extending its listening as the candidate moves.
Once found it beeps at that phase every period forever.  Buffer lengths
are randomized through a continuous draw so no two nodes ever settle on
the same phase.

The node must know its own degree and the maximum degree among its
neighbors; both are supplied by the harness, the protocol never inspects
the topology.
"""

from __future__ import annotations

from .continuous import Beep, Listen, Rebase
from .errors import ProtocolViolation
from .phases import PhaseSet, lift_onto, wrap_distance


def _last_blocking_beep(s: PhaseSet, p: float, b: float, t_period: float):
    """Largest heard phase inside the buffer window around candidate ``p``.

    Phases are lifted onto the forward scan coordinate anchored at p - b.
    The window is open at its left end: a beep exactly b before p is the
    boundary the scan itself produces via p = b + last, not a blocker
    (randomized buffers make real coincidences measure-zero, but floats
    reproduce the endpoint exactly).
    """
    anchor = p - b
    lifted = [lift_onto(anchor, x, t_period) for x in s.range_query(p - b, p + b)]
    blocking = [x for x in lifted if x > anchor]
    return max(blocking) if blocking else None


def first_clear_phase(s: PhaseSet, b: float, t_period: float):
    """Pure form of the forward scan over a fixed set of heard phases.

    Returns (phase, extra_listening) where extra_listening is how much
    additional listening the scan would have consumed.  The real protocol
    interleaves the scan with listening; this helper is the same greedy
    recurrence evaluated against a frozen set, useful for tests.
    """
    p = 0.0
    total = 0.0
    while True:
        last = _last_blocking_beep(s, p, b, t_period)
        if last is None:
            return p, total
        candidate = b + last
        if candidate <= p:
            # fixed point: the only blocker sits exactly b behind (float dust)
            return p, total
        prev, p = p, candidate
        if p >= t_period:
            raise ProtocolViolation("first-fit scan failed to settle within one period")
        total += p - prev


class BeepFirst:
    """Node-local protocol state; driven as a generator by the engine."""

    def __init__(self, t_period: float, epsilon: float, degree: int, max_degree: int,
                 rng, adaptive_interval: bool = False):
        self.t = float(t_period)
        self.epsilon = float(epsilon)
        self.d = int(degree)
        self.d_max = int(max_degree)
        self.rng = rng
        self.adaptive = adaptive_interval
        self.eps_v: float | None = None
        self.b: float | None = None
        self.interval: float | None = None
        self.p: float | None = None
        self.stable_since: float | None = None
        self.search_listening = 0.0

    @property
    def stable(self) -> bool:
        return self.stable_since is not None

    def run(self):
        t_period = self.t
        self.eps_v = float(self.rng.uniform(0.0, self.epsilon))
        self.interval = (1.0 - self.epsilon) * t_period / (2.0 * (self.d_max + 1))
        self.b = (1.0 - self.eps_v) * t_period / (2.0 * (self.d + 1))
        yield Listen(self.eps_v)  # randomized start offset; result discarded
        yield Rebase()

        heard = yield Listen(t_period)
        s = PhaseSet.from_iterable(heard, t_period)
        p = 0.0
        while True:
            last = _last_blocking_beep(s, p, self.b, t_period)
            if last is None:
                break
            candidate = self.b + last
            if candidate <= p:
                break  # blocker sits exactly b behind the candidate (float dust)
            prev, p = p, candidate
            if p >= t_period:
                raise ProtocolViolation("search outlived one period")
            extra = yield Listen(p - prev)
            self.search_listening += p - prev
            s = s.union(extra)
        self.p = p
        if self.adaptive:
            # Clearance radius measured instead of the degree-based formula.
            if s.is_empty:
                self.interval = t_period / 2.0
            else:
                self.interval = min(
                    min(wrap_distance(p, x, t_period) for x in s), t_period / 2.0
                )

        beeped_at = yield Beep()
        self.stable_since = beeped_at
        yield Listen(t_period - p)
        while True:
            yield Listen(p)
            yield Beep()
            yield Listen(t_period - p)
