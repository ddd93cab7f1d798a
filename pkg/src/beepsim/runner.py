"""Trial orchestration: build engines, drive protocols, collect checks.

A trial owns everything it touches (topology copy, protocol streams,
engine), so trials are independent and reproducible from their seed key
alone.  Global-knowledge checks (degree-estimate bounds, free-slot floor,
good-set monotonicity, interval validity) are gathered as counters, never
enforced inside the protocols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import rng as rngmod
from .analysis import (
    GOOD,
    ColoringSnapshot,
    NodeState,
    classify_good_bad,
)
from .beepfirst import BeepFirst
from .config import SimConfig
from .continuous import ContinuousEngine
from .discrete import DiscreteEngine
from .errors import ConfigError, ProtocolViolation
from .jitterjump import JitterAndJump
from .phases import wrap_distance
from .topology import DynamicEvent, Topology, build_wakeup
from .trace import TraceRow

BAD_LABELS = ("bad-colored", "bad-uncolored")


def _label_for(engine: DiscreteEngine, v: int) -> str:
    proto = engine.protocols[v]
    if proto.p is None or not proto.colored:
        return "bad-uncolored"
    q = engine.q
    pv = (proto.p + engine.wake_slot[v]) % q
    for u in engine.topology.neighbors(v):
        if u not in engine.alive:
            continue
        pu = engine.protocols[u].p
        if pu is None:
            continue
        if wrap_distance((pu + engine.wake_slot[u]) % q, pv, q) <= 1:
            return "bad-colored"
    return GOOD


def discrete_snapshot(engine: DiscreteEngine) -> ColoringSnapshot:
    states = []
    q = engine.q
    for v in sorted(engine.alive):
        proto = engine.protocols[v]
        phase = None if proto.p is None else (proto.p + engine.wake_slot[v]) % q
        states.append(NodeState(v, phase, proto.interval, proto.colored))
    return ColoringSnapshot(q, tuple(states))


class _BoundaryChecks:
    """Per-boundary bookkeeping shared by the static and dynamic runners."""

    def __init__(self, eta: float, q: int, dynamic: bool, collect_rows: bool):
        self.eta = eta
        self.q = q
        self.dynamic = dynamic
        self.collect_rows = collect_rows
        self.free_floor = (1.0 - 3.0 * eta) * q
        self.sandwich_violations = 0
        self.free_floor_violations = 0
        self.beep_bound_violations = 0
        self.window_observations = 0
        self.rows: list[TraceRow] = []

    def on_period_boundary(self, engine: DiscreteEngine, v: int, slot: int) -> None:
        proto = engine.protocols[v]
        report = proto.last_report
        if report is None:
            return
        degree = engine.topology.degree(v)
        if self.dynamic:
            # two beeps per node per period: the static floor constant does
            # not apply, only the per-period beep bound
            self.window_observations += 1
            if report.beeps_heard > 4 * degree:
                self.beep_bound_violations += 1
        elif report.period >= 1:
            if not 1 <= proto.d_tilde <= max(2 * degree, 1):
                self.sandwich_violations += 1
        if (
            not self.dynamic
            and report.free_count is not None
            and report.free_count < self.free_floor
        ):
            self.free_floor_violations += 1
        if self.collect_rows:
            self.rows.append(
                TraceRow(
                    period=report.period,
                    node=v,
                    phase=report.phase,
                    jitter=report.jitter,
                    interval=report.interval,
                    colored=report.colored,
                    label=_label_for(engine, v),
                    beeps_heard=report.beeps_heard,
                )
            )


@dataclass
class JitterJumpResult:
    """One discrete-protocol trial."""

    topology: Topology
    q: int
    converged_period: int | None
    periods_run: int
    snapshot: ColoringSnapshot | None
    labels: dict[int, str] | None
    final_snapshot: ColoringSnapshot | None
    final_labels: dict[int, str] | None
    wake: dict[int, int]
    sandwich_violations: int
    free_floor_violations: int
    monotonic_violations: int
    beep_bound_violations: int
    window_observations: int
    resets: int
    rows: list[TraceRow] = field(default_factory=list)
    good_history: list[int] = field(default_factory=list)
    all_good_periods: list[int] = field(default_factory=list)
    reset_periods: dict[int, list[int]] = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.converged_period is not None

    def restabilized_after(self, period: int) -> int | None:
        """Periods from an event at ``period`` until the next all-good state."""
        for g in self.all_good_periods:
            if g >= period:
                return g - period
        return None


def run_jitterjump_trial(
    topology: Topology,
    cfg: SimConfig,
    seed_key: tuple = (),
    events: tuple[DynamicEvent, ...] = (),
    max_periods: int | None = None,
    collect_rows: bool = False,
    stop_on_convergence: bool = True,
    state_hook=None,
) -> JitterJumpResult:
    """Run the slot-claiming protocol on one topology until convergence.

    ``state_hook(engine, period, labels)`` is called after every global
    period boundary, for tests that want to watch intermediate state.
    """
    q = cfg.resolve_q(topology.delta)
    n = topology.n
    master = cfg.master_seed
    wake = build_wakeup(
        cfg.wakeup, topology.nodes, q, rngmod.stream(master, *seed_key, "wakeup")
    )
    window = cfg.window_length(n)

    def factory(v: int) -> JitterAndJump:
        return JitterAndJump(
            q,
            cfg.eta,
            rngmod.stream(master, *seed_key, v, "protocol"),
            dynamic=cfg.dynamic,
            window=window,
        )

    checks = _BoundaryChecks(cfg.eta, q, cfg.dynamic, collect_rows)
    engine = DiscreteEngine(topology, q, factory, wake, events=events, observer=checks)
    if max_periods is None:
        max_periods = cfg.max_periods or max(64, math.ceil(50.0 * math.log(max(n, 2))))

    monotonic_violations = 0
    prev_good: set[int] = set()
    converged_period = None
    snapshot = None
    labels_at_convergence = None
    good_history: list[int] = []
    all_good_periods: list[int] = []
    reset_periods: dict[int, list[int]] = {}
    prev_resets: dict[int, int] = {}

    engine.run_slots(1)  # wake processing at slot 0
    periods_run = 0
    for k in range(1, max_periods + 1):
        engine.run_slots(q)
        periods_run = k
        current = discrete_snapshot(engine)
        labels = classify_good_bad(current, engine.topology)
        good = {v for v, lab in labels.items() if lab == GOOD}
        good_history.append(len(good))
        lost = (prev_good & engine.alive) - good
        monotonic_violations += len(lost)
        prev_good = good
        if cfg.dynamic:
            for v in engine.alive:
                resets = engine.protocols[v].resets
                if resets > prev_resets.get(v, 0):
                    reset_periods.setdefault(v, []).append(k)
                prev_resets[v] = resets
        if state_hook is not None:
            state_hook(engine, k, labels)
        if good == engine.alive and engine.alive:
            all_good_periods.append(k)
            if converged_period is None:
                converged_period = k
                snapshot = current
                labels_at_convergence = labels
            if stop_on_convergence:
                break

    final_snapshot = discrete_snapshot(engine)
    final_labels = classify_good_bad(final_snapshot, engine.topology)
    if snapshot is None:
        snapshot = final_snapshot
        labels_at_convergence = final_labels

    total_resets = sum(engine.protocols[v].resets for v in engine.alive)
    return JitterJumpResult(
        topology=engine.topology,
        q=q,
        converged_period=converged_period,
        periods_run=periods_run,
        snapshot=snapshot,
        labels=labels_at_convergence,
        final_snapshot=final_snapshot,
        final_labels=final_labels,
        wake=dict(engine.wake_slot),
        sandwich_violations=checks.sandwich_violations,
        free_floor_violations=checks.free_floor_violations,
        monotonic_violations=monotonic_violations,
        beep_bound_violations=checks.beep_bound_violations,
        window_observations=checks.window_observations,
        resets=total_resets,
        rows=checks.rows,
        good_history=good_history,
        all_good_periods=all_good_periods,
        reset_periods=reset_periods,
    )


def collision_escape_trial(cfg: SimConfig, seed_key: tuple, phase: int | None = None) -> bool:
    """Engineer two adjacent colored nodes onto the same slot; report whether
    both give the slot up at the end of the next period."""
    topo = Topology.from_edges(2, [(0, 1)])
    q = cfg.resolve_q(topo.delta)
    master = cfg.master_seed

    def factory(v: int) -> JitterAndJump:
        return JitterAndJump(q, cfg.eta, rngmod.stream(master, *seed_key, v, "protocol"))

    engine = DiscreteEngine(topo, q, factory, {0: 0, 1: 0})
    engine.run_slots(1)
    slot = q // 2 if phase is None else phase
    for v in (0, 1):
        proto = engine.protocols[v]
        proto.colored = True
        proto.p = slot
    # Boundary at Q keeps the injected phases (colored nodes do not redraw),
    # the collision period runs, and the boundary at 2Q applies the verdict.
    engine.run_slots(2 * q)
    return all(not engine.protocols[v].colored for v in (0, 1))


# -- continuous-model trials -------------------------------------------------


def build_wakeup_continuous(spec, nodes, t_period, rng) -> dict[int, float]:
    if spec == "simultaneous":
        return {v: 0.0 for v in nodes}
    if spec == "random":
        return {v: float(rng.uniform(0.0, t_period)) for v in nodes}
    if isinstance(spec, dict):
        return {v: float(spec[v]) for v in nodes}
    raise ConfigError(f"unknown continuous wakeup spec {spec!r}")


@dataclass
class BeepFirstResult:
    """One continuous-protocol trial."""

    topology: Topology
    t_period: float
    all_stable: bool
    late_nodes: int
    search_overruns: int
    tie_collisions: int
    snapshot: ColoringSnapshot
    wake: dict[int, float]
    max_stable_delay: float
    rows: list[TraceRow] = field(default_factory=list)

    def protocol_state(self, v):
        return self._protocols[v]


def run_beepfirst_trial(
    topology: Topology,
    cfg: SimConfig,
    seed_key: tuple = (),
    horizon_periods: float = 4.0,
    collect_rows: bool = False,
) -> BeepFirstResult:
    t_period = cfg.T
    master = cfg.master_seed
    wake = build_wakeup_continuous(
        cfg.wakeup, topology.nodes, t_period, rngmod.stream(master, *seed_key, "wakeup")
    )

    def factory(v: int) -> BeepFirst:
        return BeepFirst(
            t_period,
            cfg.epsilon,
            topology.degree(v),
            topology.max_neighborhood_degree(v),
            rngmod.stream(master, *seed_key, v, "protocol"),
            adaptive_interval=cfg.adaptive_interval,
        )

    engine = ContinuousEngine(topology, t_period, factory, wake)
    overruns = 0
    try:
        engine.run_until(max(wake.values(), default=0.0) + horizon_periods * t_period)
    except ProtocolViolation:
        overruns = 1

    states = []
    late = 0
    max_delay = 0.0
    for v in sorted(topology.nodes):
        proto = engine.protocols[v]
        theta = engine.theta(v)
        if proto.stable:
            phase = (proto.p + theta) % t_period
            delay = proto.stable_since - wake[v]
            max_delay = max(max_delay, delay)
            if delay >= 3.0 * t_period:
                late += 1
        else:
            phase = None
            late += 1
        states.append(NodeState(v, phase, proto.interval, proto.stable))
    snapshot = ColoringSnapshot(t_period, tuple(states))
    all_stable = all(engine.protocols[v].stable for v in topology.nodes)

    rows: list[TraceRow] = []
    if collect_rows:
        for v in sorted(topology.nodes):
            proto = engine.protocols[v]
            node_origin = engine._nodes[v].origin
            heard = engine.heard_log(v)
            for k in range(int(horizon_periods)):
                start = node_origin + k * t_period
                end = start + t_period
                n_heard = sum(1 for t in heard if start <= t < end)
                settled = proto.stable and proto.stable_since < end
                rows.append(
                    TraceRow(
                        period=k,
                        node=v,
                        phase=proto.p if settled else None,
                        jitter=None,
                        interval=proto.interval if settled else None,
                        colored=settled,
                        label="stable" if settled else "searching",
                        beeps_heard=n_heard,
                    )
                )

    result = BeepFirstResult(
        topology=topology,
        t_period=t_period,
        all_stable=all_stable,
        late_nodes=late,
        search_overruns=overruns,
        tie_collisions=engine.tie_collisions,
        snapshot=snapshot,
        wake=wake,
        max_stable_delay=max_delay,
        rows=rows,
    )
    result._protocols = dict(engine.protocols)
    return result
