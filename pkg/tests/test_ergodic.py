"""Tests for iterate traces, mean averages, and power-boundedness probes.

Oracles: the first basis vector under the averaging operator has exactly
computable norms on a geometric weight (closed forms recomputed here), the
constant vector is a fixed point, and finite-rank identities hold exactly in
rational mode.  Residual soundness is checked against hand-derived tail
sums, and expectations are cross-checked with the criteria layer.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from cesaro.criteria import s1_estimate, uw_quantity
from cesaro.ergodic import (
    MONOTONE_BURN_IN,
    BudgetError,
    ErgodicError,
    IterateTrace,
    cesaro_averages_trace,
    decomposition_project,
    ergodic_identity_check,
    iterate_trace,
    kernel_bound_am,
    power_bounded_probe,
    range_identity_check,
    trace_to_csv,
    weight_l1_bound,
    work_budget,
)
from cesaro.sections import apply_power, kernel_power_entry, weighted_norm


def basis(k: int, N: int) -> list:
    return [1.0 if i == k else 0.0 for i in range(1, N + 1)]


# ---------------------------------------------------------------------------
# iterate traces on a geometric weight


def test_first_basis_vector_approaches_constant(geom05):
    trace = iterate_trace(geom05, basis(1, 400), 12, 400, probe_id="e1")
    assert trace.limit_scalar == 1.0
    records = {m: (norm, res) for m, norm, res in trace.records}
    # closed form at m=1: ||C e1 - 1|| = sum 2^-n (1 - 1/n) = 1 - ln 2
    assert records[1][0] == pytest.approx(math.log(2), rel=1e-12)
    assert records[1][1] == pytest.approx(1 - math.log(2), rel=1e-9)
    assert records[10][1] == pytest.approx(9.604924017284377e-4, rel=1e-9)
    assert records[10][1] < 1e-3


def test_third_basis_vector_decays_to_zero(geom05):
    trace = iterate_trace(geom05, basis(3, 400), 8, 400, probe_id="e3")
    assert trace.limit_scalar == 0.0
    # closed form: ||C e3|| = sum_{n>=3} 2^-n / n = ln 2 - 1/2 - 1/8
    first = trace.records[0][1]
    assert first == pytest.approx(math.log(2) - 0.625, rel=1e-12)
    assert trace.records[5][1] < 1e-3
    # every norm sits below the kernel majorant ||w||_1 a_m / (r - 1)
    l1 = weight_l1_bound(geom05)
    for m, norm, _ in trace.records:
        assert norm <= l1 * kernel_bound_am(m) / 2 * (1 + 1e-12)


def test_constant_vector_is_fixed(geom05):
    trace = iterate_trace(geom05, [1] * 50, 6, 50, probe_id="ones",
                          mode="rational")
    norms = [norm for _, norm, _ in trace.records]
    assert norms == pytest.approx([norms[0]] * 6, rel=1e-12)
    # the residual against the constant limit is exactly the weight tail
    for _, _, res in trace.records:
        assert res == pytest.approx(trace.tail_residual_bound, rel=1e-12)


def test_trace_records_well_formed(geom05):
    trace = iterate_trace(geom05, basis(1, 200), 15, 200, probe_id="e1")
    ms = [m for m, _, _ in trace.records]
    assert ms == list(range(1, 16))
    assert all(norm >= 0 for _, norm, _ in trace.records)
    late = [res for m, _, res in trace.records if m >= MONOTONE_BURN_IN]
    assert all(a >= b - 1e-15 for a, b in zip(late, late[1:]))


def test_trace_tail_bound_is_sound(geom05):
    # truncated residual + certified tail must dominate a longer truncation
    small = iterate_trace(geom05, basis(1, 100), 5, 100, probe_id="e1")
    large = iterate_trace(geom05, basis(1, 2000), 5, 2000, probe_id="e1")
    for (m1, _, r1), (m2, _, r2) in zip(small.records, large.records):
        assert m1 == m2
        assert r1 + small.tail_residual_bound >= r2 - 1e-15


def test_trace_without_limit_leaves_residual_blank(poly05):
    trace = iterate_trace(poly05, basis(1, 300), 4, 300, probe_id="e1")
    assert trace.limit_scalar is None
    assert all(res is None for _, _, res in trace.records)


def test_rational_and_float_traces_agree(geom05):
    x = [Fraction(1), Fraction(-1, 2), Fraction(1, 3)] + [Fraction(0)] * 47
    exact = iterate_trace(geom05, x, 6, 50, probe_id="mix", mode="rational")
    approx = iterate_trace(geom05, [float(v) for v in x], 6, 50,
                           probe_id="mix", mode="float")
    for (_, ne, _), (_, nf, _) in zip(exact.records, approx.records):
        assert nf == pytest.approx(ne, rel=1e-12)


def test_trace_serialization_shapes(geom05, poly05):
    trace = iterate_trace(geom05, basis(1, 50), 3, 50, probe_id="e1")
    doc = trace.to_json_dict()
    assert doc["probe_id"] == "e1"
    assert doc["N"] == 50
    assert len(doc["records"]) == 3
    csv = trace_to_csv(trace)
    lines = csv.strip().splitlines()
    assert lines[0] == "m,norm,residual"
    assert len(lines) == 4
    m, norm, res = lines[1].split(",")
    assert int(m) == 1 and float(norm) > 0 and float(res) > 0
    blank = trace_to_csv(iterate_trace(poly05, basis(1, 50), 2, 50,
                                       probe_id="e1"))
    assert blank.strip().splitlines()[1].endswith(",")


# ---------------------------------------------------------------------------
# mean averages


def test_averages_first_step_matches_iterate(geom05):
    avg = cesaro_averages_trace(geom05, basis(1, 200), 1, 200, probe_id="e1")
    it = iterate_trace(geom05, basis(1, 200), 1, 200, probe_id="e1")
    assert avg.records[0][1] == pytest.approx(it.records[0][1], rel=1e-12)
    assert avg.records[0][2] == pytest.approx(it.records[0][2], rel=1e-12)


def test_averages_converge_to_projection(geom05):
    avg = cesaro_averages_trace(geom05, basis(1, 400), 100, 400,
                                probe_id="e1")
    residuals = [res for _, _, res in avg.records]
    assert residuals[-1] == pytest.approx(math.log(2) / 100, rel=1e-2)
    assert residuals[-1] < residuals[9] < residuals[0]


def test_averages_of_decaying_probe_vanish(geom05):
    avg = cesaro_averages_trace(geom05, basis(3, 400), 200, 400,
                                probe_id="e3")
    assert avg.limit_scalar == 0.0
    assert avg.records[-1][1] < 0.01


def test_averages_rational_mode_exact(geom05):
    avg = cesaro_averages_trace(geom05, [1] + [0] * 29, 4, 30, probe_id="e1",
                                mode="rational")
    # average after 2 steps of coordinate 2 is (1/2 + 3/8) / 2 = 7/16;
    # check through the recomputed weighted norm of the known averages
    powers = [apply_power([Fraction(1)] + [Fraction(0)] * 29, m, 30,
                          mode="rational") for m in (1, 2, 3, 4)]
    acc = [Fraction(0)] * 30
    for n, p in enumerate(powers, 1):
        acc = [a + v for a, v in zip(acc, p)]
        norm = weighted_norm([a / n for a in acc], geom05)
        assert avg.records[n - 1][1] == pytest.approx(norm, rel=1e-12)


# ---------------------------------------------------------------------------
# exact identities


def test_range_identity_small_ranks():
    for r in range(1, 13):
        assert range_identity_check(r, 40) == 0.0
    with pytest.raises(ErgodicError):
        range_identity_check(0, 10)
    with pytest.raises(ErgodicError):
        range_identity_check(10, 10)


def test_ergodic_identities_exact_rational(geom05):
    x = [Fraction(1), Fraction(1, 2), Fraction(-2)] + [Fraction(0)] * 22
    for n in (1, 2, 3, 7):
        res1, res2 = ergodic_identity_check(geom05, x, n, 25,
                                            mode="rational")
        assert res1 == 0.0 and res2 == 0.0


def test_ergodic_identities_float(geom05):
    x = [1.0, 0.5, -2.0] + [0.0] * 47
    for n in (1, 4, 9):
        res1, res2 = ergodic_identity_check(geom05, x, n, 50, mode="float")
        assert res1 <= 1e-12 and res2 <= 1e-12


# ---------------------------------------------------------------------------
# the ergodic decomposition


def test_decomposition_examples(geom05):
    c, rem = decomposition_project(geom05, (1.0, 0.0, 0.0), 3)
    assert c == 1.0
    assert rem == (0.0, -1.0, -1.0)
    c2, rem2 = decomposition_project(geom05, (0.0, 1.0, 0.0), 3)
    assert c2 == 0.0
    assert rem2 == (0.0, 1.0, 0.0)
    c3, rem3 = decomposition_project(geom05, (2.0, 2.0, 2.0), 3)
    assert c3 == 2.0
    assert rem3 == (0.0, 0.0, 0.0)


def test_decomposition_reconstructs(geom05):
    x = (0.3, -1.2, 4.0, 0.0)
    c, rem = decomposition_project(geom05, x, 4)
    for xi, ri in zip(x, rem):
        assert c + ri == pytest.approx(xi, rel=1e-15)


def test_decomposition_needs_summable_weight(poly1):
    with pytest.raises(ErgodicError):
        decomposition_project(poly1, (1.0, 0.0), 2)


# ---------------------------------------------------------------------------
# kernel majorant


def test_kernel_bound_values():
    assert kernel_bound_am(1) == 1.0
    assert kernel_bound_am(2) == pytest.approx(math.exp(-1), rel=1e-12)
    vals = [kernel_bound_am(m) for m in range(1, 30)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_kernel_bound_dominates_entries():
    # |(C^m e_r)_n| <= a_m / (r - 1) for r >= 2, checked on an exact grid
    for r in (2, 3, 4):
        for m in range(1, 6):
            cap = kernel_bound_am(m) / (r - 1)
            for n in range(r, 31):
                entry = float(kernel_power_entry(n, r, m))
                assert abs(entry) <= cap * (1 + 1e-12)


def test_weight_l1_bound(geom05, poly1):
    assert weight_l1_bound(geom05) == pytest.approx(1.0, rel=1e-9)
    assert weight_l1_bound(poly1) is None


# ---------------------------------------------------------------------------
# power-boundedness probes


def test_probe_report_on_compact_weight(geom05):
    report = power_bounded_probe(geom05, 30, 200)
    assert report.expectation == "bounded"
    cap = uw_quantity(geom05, horizon=10 ** 4).verdict.certified_bound
    by_id = {p.probe_id: p for p in report.probes}
    assert by_id["e1"].sup_ratio <= cap + 1e-9
    assert by_id["e1"].sup_ratio == pytest.approx(2.0, abs=1e-6)
    for p in report.probes:
        assert p.sup_ratio <= cap + 1e-9
    # basis probes recover the reciprocal eigenvalues as decay rates
    for m in (2, 3, 4):
        assert by_id[f"e{m}"].growth_per_step == pytest.approx(1.0 / m,
                                                               rel=2e-2)


def test_probe_report_on_growing_weight(poly05):
    report = power_bounded_probe(poly05, 6, 2000)
    assert report.expectation == "growth"
    s1 = s1_estimate(poly05, horizon=10 ** 4)
    assert report.expected_growth_factor == pytest.approx(1.0 / s1.point,
                                                          rel=1e-9)


def test_probe_report_without_verdict(block413a2):
    report = power_bounded_probe(block413a2, 6, 500)
    assert report.expectation == "open"
    assert report.expected_growth_factor is None
    assert any("without a boundedness verdict" in note
               for note in report.notes)


def test_probe_constant_vector(geom05):
    ones = [("ones", [1.0] * 200)]
    report = power_bounded_probe(geom05, 10, 200, probes=ones)
    assert report.probes[0].sup_ratio == pytest.approx(1.0, rel=1e-12)


def test_probe_rejects_zero_vector(geom05):
    with pytest.raises(ErgodicError):
        power_bounded_probe(geom05, 5, 50, probes=[("zero", [0.0] * 50)])


def test_probe_report_serializes(geom05):
    report = power_bounded_probe(geom05, 5, 50)
    doc = report.to_json_dict()
    assert doc["expectation"] == "bounded"
    assert len(doc["probes"]) == len(report.probes)
    assert {"probe_id", "sup_ratio", "growth_per_step"} <= \
        set(doc["probes"][0])


def test_mean_ergodic_coupling(geom05, poly05):
    # averages stay bounded exactly where the operator is power bounded
    bounded = cesaro_averages_trace(geom05, basis(1, 300), 40, 300,
                                    probe_id="e1")
    growing = cesaro_averages_trace(poly05, basis(1, 300), 40, 300,
                                    probe_id="e1")
    bnorms = [n for _, n, _ in bounded.records]
    gnorms = [n for _, n, _ in growing.records]
    assert max(bnorms) <= 1.0 + 1e-9
    assert gnorms[-1] > gnorms[0]


# ---------------------------------------------------------------------------
# budget control


def test_budget_env_controls_work(geom05, monkeypatch):
    monkeypatch.setenv("CESARO_BUDGET", "100")
    assert work_budget() == 100
    with pytest.raises(BudgetError):
        iterate_trace(geom05, basis(1, 50), 10, 50, probe_id="e1")
    monkeypatch.setenv("CESARO_BUDGET", "1e6")
    assert work_budget() == 10 ** 6
    monkeypatch.setenv("CESARO_BUDGET", "plenty")
    with pytest.raises(ErgodicError):
        work_budget()


def test_budget_applies_to_probe_suite(geom05, monkeypatch):
    monkeypatch.setenv("CESARO_BUDGET", "1000")
    with pytest.raises(BudgetError):
        power_bounded_probe(geom05, 100, 100)
