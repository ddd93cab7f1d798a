"""Randomized slot-claiming protocol with collision-detecting jitter.

Each node estimates its degree from the beeps it hears, keeps a guard
buffer inversely proportional to that estimate, and jumps to a uniformly
random free slot until a period passes with no beep inside its buffer.
Every beep is shifted by a fresh one-slot random jitter (applied mod Q,
so a node holding the last slot of the period beeps in slot 0 instead),
so two nodes that claimed the same slot eventually beep one slot apart,
hear each other, and both restart.

In dynamic mode a node additionally beeps at a second, freshly drawn free
slot every period and tracks the maximum per-period beep count over a
moving window; if that maximum falls below 1/16 of the degree estimate,
the estimate is rebuilt and the node gives its slot up, which lets the
network recover larger intervals after the neighborhood shrinks.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import ProtocolViolation
from .phases import in_range


def buffer_length(eta: float, q: int, estimate: int) -> int:
    """Guard buffer in slots: floor(eta*Q/(estimate+1)), at least 1."""
    return max(1, math.floor(eta * q / (estimate + 1)))


def measured_interval(heard: tuple[int, ...], phase: int, q: int) -> int:
    """Largest s such that no beep was heard in [phase-s, phase].

    Q-1 when nothing was heard at all; 0 when a beep landed on the phase
    itself (the node is about to restart anyway in that case).
    """
    if not heard:
        return q - 1
    gap = min((phase - x) % q for x in heard)
    return max(gap - 1, 0)


def heard_in_range(heard, a, b, q) -> bool:
    return any(in_range(x, a, b, q) for x in heard)


def free_slots(heard, b: int, q: int, own_phase: int | None = None) -> list[int]:
    """Slots whose guard window [p-b-2, p+b+1] contains no occupied slot.

    Occupied slots are the heard beeps plus the node's own current phase,
    so a node never jumps next to itself.  A slot p is blocked by an
    occupied slot x exactly when p lies in [x-b-1, x+b+2] (wrap-aware).
    """
    markers = set(heard)
    if own_phase is not None:
        markers.add(own_phase % q)
    if not markers:
        return list(range(q))
    width = 2 * b + 4
    if width >= q:
        return []
    blocked = bytearray(q)
    for x in markers:
        base = (x - b - 1) % q
        for t in range(width):
            i = base + t
            blocked[i - q if i >= q else i] = 1
    return [p for p in range(q) if not blocked[p]]


@dataclass(frozen=True)
class PeriodReport:
    """Observation record for one completed local period."""

    period: int
    phase: int | None
    jitter: int | None
    interval: int | None
    beeps_heard: int
    colored: bool
    free_count: int | None
    reset: bool = False


class JitterAndJump:
    """Node-local state machine driven by :class:`DiscreteEngine`.

    The protocol is anonymous: it sees only its own random stream and the
    phases it heard, never a node identity.
    """

    def __init__(self, q: int, eta: float, rng, dynamic: bool = False, window: int = 1):
        self.q = q
        self.eta = eta
        self.rng = rng
        self.dynamic = dynamic
        self.colored = False
        self.p: int | None = None
        self.jitter: int | None = None
        self.d_tilde = 1
        self.b = buffer_length(eta, q, 1)
        self.interval: int | None = None
        self.period = 0
        self.p_prime: int | None = None
        self.d_star: int | None = None
        self.resets = 0
        self._window: deque[int] | None = deque(maxlen=window) if dynamic else None
        self.last_report: PeriodReport | None = None

    def on_period_end(self, heard: tuple[int, ...]) -> tuple[int, ...]:
        """Digest one finished period and plan the next one's beeps."""
        q = self.q
        n_heard = len(heard)
        interval = None
        reset = False
        if self.period == 0:
            self.d_tilde = max(n_heard, 1)
            if self.dynamic:
                self._window.append(n_heard)
                self.d_star = max(self._window)
            self.b = buffer_length(self.eta, q, self.d_tilde)
        else:
            interval = measured_interval(heard, self.p, q)
            self.interval = interval
            if self.dynamic:
                self._window.append(n_heard)
                self.d_star = max(self._window)
                self.d_tilde = max(self.d_tilde, self.d_star)
            else:
                self.d_tilde = max(n_heard, 1)
            self.b = buffer_length(self.eta, q, self.d_tilde)
            if not heard_in_range(heard, self.p - self.b, self.p + self.b, q):
                self.colored = True
            elif heard_in_range(heard, self.p - 1, self.p + 2, q):
                self.colored = False
            if self.dynamic and self.d_star < self.d_tilde / 16:
                self.d_tilde = max(self.d_star, 1)
                self.b = buffer_length(self.eta, q, self.d_tilde)
                self.colored = False
                self.resets += 1
                reset = True

        used_phase = self.p
        used_jitter = self.jitter
        free_count = None
        free: list[int] | None = None
        if not self.colored or self.dynamic:
            free = free_slots(heard, self.b, q, own_phase=self.p)
            free_count = len(free)
            if not free:
                raise ProtocolViolation(
                    f"no free slots (Q={q}, b={self.b}, heard={n_heard}); "
                    "parameters are outside the supported regime"
                )
        if not self.colored:
            self.p = int(free[self.rng.integers(len(free))])
        self.jitter = int(self.rng.integers(2))
        # the jittered beep position is modular: at p = Q-1 a jitter of 1
        # beeps in slot 0 of the same period, keeping the node audible once
        # per period window exactly as the modular window checks assume
        offsets = [(self.p + self.jitter) % q]
        if self.dynamic:
            self.p_prime = int(free[self.rng.integers(len(free))])
            offsets.append(self.p_prime)

        self.last_report = PeriodReport(
            period=self.period,
            phase=used_phase,
            jitter=used_jitter,
            interval=interval,
            beeps_heard=n_heard,
            colored=self.colored,
            free_count=free_count,
            reset=reset,
        )
        self.period += 1
        return tuple(offsets)

    def fingerprint(self):
        window = tuple(self._window) if self._window is not None else None
        return (
            self.period,
            self.colored,
            self.p,
            self.jitter,
            self.d_tilde,
            self.b,
            self.interval,
            self.p_prime,
            self.d_star,
            window,
        )
