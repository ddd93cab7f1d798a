"""Validators, classification, and the vertex-coloring reduction."""

import pytest

from beepsim.analysis import (
    ColoringSnapshot,
    NodeState,
    classify_good_bad,
    fit_log_growth,
    hardness_reduction,
    neighbor_phase_ties,
    validate_interval_coloring,
)
from beepsim.errors import InternalInconsistencyError
from beepsim.topology import Topology


def snap(tau, *triples):
    states = tuple(NodeState(i, p, i_len, colored)
                   for i, (p, i_len, colored) in enumerate(triples))
    return ColoringSnapshot(tau, states)


def test_disjoint_intervals_pass():
    topo = Topology.from_edges(2, [(0, 1)])
    report = validate_interval_coloring(snap(32, (2, 3, True), (10, 3, True)), topo)
    assert report.ok
    assert report.pairs_checked == 1


def test_overlapping_intervals_flagged():
    topo = Topology.from_edges(2, [(0, 1)])
    report = validate_interval_coloring(snap(32, (5, 3, True), (6, 3, True)), topo)
    assert report.violations == ((0, 1),)


def test_wrap_around_interval_overlap_detected():
    topo = Topology.from_edges(2, [(0, 1)])
    # node 0's arc [30, 1] wraps; node 1's arc [0, 4] meets it at 0..1
    report = validate_interval_coloring(snap(32, (1, 3, True), (4, 4, True)), topo)
    assert not report.ok


def test_normalized_interval_metric():
    topo = Topology.from_edges(2, [(0, 1)])
    report = validate_interval_coloring(
        snap(32, (2, 2, True), (20, 2, True)), topo, eta=1 / 16, q=32
    )
    # dmax = 1 for both: normalized = 2 * 3 / 2 = 3
    assert report.min_normalized_interval == pytest.approx(3.0)


def test_uncolored_nodes_are_not_checked():
    topo = Topology.from_edges(2, [(0, 1)])
    report = validate_interval_coloring(snap(32, (5, 3, True), (6, 3, False)), topo)
    assert report.pairs_checked == 0


def test_classification_cases():
    topo = Topology.from_edges(3, [(0, 1), (1, 2)])
    labels = classify_good_bad(snap(32, (4, 1, True), (6, 1, True), (7, 1, False)), topo)
    assert labels[0] == "good"          # distance 2 from its only neighbor
    assert labels[1] == "bad-colored"   # node 2 sits one slot away
    assert labels[2] == "bad-uncolored"


def test_classification_wraps_and_ignores_phaseless():
    topo = Topology.from_edges(3, [(0, 1), (0, 2)])
    labels = classify_good_bad(snap(16, (0, 1, True), (15, 1, True), (None, None, False)), topo)
    assert labels[0] == "bad-colored"  # 15 and 0 are adjacent mod 16
    assert labels[2] == "bad-uncolored"
    topo2 = Topology.from_edges(2, [(0, 1)])
    labels2 = classify_good_bad(snap(16, (5, 1, True), (None, None, False)), topo2)
    assert labels2[0] == "good"  # a neighbor without a phase cannot conflict


def test_hardness_reduction_examples():
    topo = Topology.from_edges(1, [])
    colors = hardness_reduction({0: 0}, {0: 7}, 16, topo)
    assert colors == {0: 7}

    topo2 = Topology.from_edges(2, [(0, 1)])
    colors2 = hardness_reduction({0: 3, 1: 9}, {0: 0, 1: 0}, 16, topo2)
    assert colors2[0] != colors2[1]


def test_hardness_reduction_rejects_improper_input():
    topo = Topology.from_edges(2, [(0, 1)])
    with pytest.raises(InternalInconsistencyError):
        hardness_reduction({0: 3, 1: 3}, {0: 0, 1: 0}, 16, topo)
    # equal colors via offsets also caught
    with pytest.raises(InternalInconsistencyError):
        hardness_reduction({0: 3, 1: 1}, {0: 0, 1: 2}, 16, topo)


def test_neighbor_phase_ties_counts_exact_equality():
    topo = Topology.from_edges(2, [(0, 1)])
    assert neighbor_phase_ties(snap(1.0, (0.25, 0.1, True), (0.25, 0.1, True)), topo) == 1
    assert neighbor_phase_ties(snap(1.0, (0.25, 0.1, True), (0.2500001, 0.1, True)), topo) == 0


def test_fit_log_growth():
    import math

    ns = [16, 32, 64, 128]
    ys = [2.0 * math.log(n) for n in ns]
    c, slope = fit_log_growth(ns, ys)
    assert c == pytest.approx(2.0)
    assert slope == pytest.approx(2.0)
    _, flat_slope = fit_log_growth(ns, [3, 3, 3, 3])
    assert flat_slope == pytest.approx(0.0, abs=1e-12)
