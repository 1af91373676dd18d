"""Certified criteria: verdict oracles, brackets, soundness properties."""

import math

import numpy as np
import pytest

from cesaro.weights import catalog_weight, custom_weight
from cesaro.criteria import (
    comparison_transfer,
    compactness_criterion,
    continuity_criterion,
    monotone_majorant_test,
    ratio_limsup_test,
    rw_membership,
    s1_estimate,
    suffix_log_sums,
    sw1_membership,
    t0_estimate,
    uw_quantity,
)

HORIZONS = (10 ** 4, 10 ** 5, 10 ** 6)


def empirical_continuity(w, n, horizon=10 ** 6):
    """Independent recomputation of the sup quantity at one index."""
    ns = np.arange(n, horizon + 1, dtype=np.int64)
    inner = float(np.sum(np.exp(w.log_eval(ns)) / ns.astype(float)))
    return inner / math.exp(w.log_eval(n))


def empirical_uw(w, m, horizon=10 ** 6):
    ns = np.arange(m + 1, horizon + 1, dtype=np.int64)
    inner = float(np.sum(np.exp(w.log_eval(ns))))
    return inner / (m * math.exp(w.log_eval(m + 1)))


# ---------------------------------------------------------------------------
# continuity


def test_continuity_poly2(poly2):
    report = continuity_criterion(poly2)
    v = report.verdict
    assert v.is_holds
    assert 0.5 <= v.certified_bound <= 2.0
    assert v.empirical_sup <= v.certified_bound
    assert v.empirical_sup >= 0.5 - 1e-9


def test_continuity_loggamma1_diverges(loggamma1):
    report = continuity_criterion(loggamma1)
    v = report.verdict
    assert v.is_fails
    assert v.witness is not None
    assert v.witness.kind == "diverging-inner-series"


def test_continuity_loggamma2_growth(loggamma2):
    report = continuity_criterion(loggamma2)
    v = report.verdict
    assert v.is_fails
    assert v.witness is not None
    # quantity at index n certifiably exceeds ln(n+1)/(gamma-1)
    idx = v.witness.index
    assert v.witness.value >= math.log(idx + 1.0) / 1.0 - 1e-9


def test_continuity_spike(spike):
    report = continuity_criterion(spike)
    v = report.verdict
    assert v.is_holds
    assert v.certified_bound <= math.pi ** 2 / 6.0 + 3.0


def test_continuity_samples_recomputable(poly2):
    """Samples equal the partial sum plus the certified remainder: they are
    sandwiched between a bare partial recomputation and partial + tail."""
    horizon = 10 ** 5
    report = continuity_criterion(poly2, horizon=horizon)
    from cesaro.weights import tail_bound
    closure = tail_bound(poly2, horizon + 1, 0.0)
    for n, value in report.samples[:12]:
        partial = empirical_continuity(poly2, n, horizon)
        ceiling = partial + closure / math.exp(poly2.log_eval(n))
        assert partial * (1.0 - 1e-12) <= value <= ceiling * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# compactness


def test_compactness_poly2_fails(poly2):
    report = compactness_criterion(poly2)
    v = report.verdict
    assert v.is_fails
    assert v.witness is not None
    # the quantity stays above 1/alpha = 0.5
    assert v.witness.value >= 0.5 - 1e-9


def test_compactness_block313_fails(block313):
    report = compactness_criterion(block313)
    assert report.verdict.is_fails


def test_compactness_expbeta_holds():
    w = catalog_weight("expbeta", {"beta": 0.5})
    report = compactness_criterion(w)
    assert report.verdict.is_holds


# ---------------------------------------------------------------------------
# ratio and monotone-majorant tests


def test_ratio_geom_holds():
    w = catalog_weight("geom", {"r": 0.5, "beta": 3.0})
    report = ratio_limsup_test(w)
    assert report.verdict.is_holds
    assert report.verdict.certified_bound < 1.0
    # the limit ratio is r = 0.5; the scan-top estimate sits right on it
    assert report.verdict.empirical_sup == pytest.approx(0.5, abs=1e-4)


def test_ratio_alternating_holds():
    """Ratios alternate 1/4, 1/2; the certified limsup bound is 1/2."""
    w = custom_weight(
        "alternating", lambda n: -(n + n // 2) * math.log(2.0),
        ratio_bound=(1, 0.5), is_summable=True)
    ratios = [math.exp(w.log_eval(n + 1) - w.log_eval(n))
              for n in range(1, 40)]
    assert max(ratios) == pytest.approx(0.5)
    assert sorted(set(round(r, 12) for r in ratios)) == [0.25, 0.5]
    report = ratio_limsup_test(w)
    assert report.verdict.is_holds
    assert report.verdict.certified_bound == pytest.approx(0.5)


def test_ratio_expbeta_inconclusive():
    w = catalog_weight("expbeta", {"beta": 0.5})
    report = ratio_limsup_test(w)
    assert report.verdict.is_inconclusive


def test_monotone_majorant():
    explog2 = catalog_weight("explog", {"gamma": 2.0})
    assert monotone_majorant_test(explog2, 3).is_holds
    poly2 = catalog_weight("poly", {"alpha": 2.0})
    assert monotone_majorant_test(poly2, 3).is_fails
    superfact = catalog_weight("superfact")
    v = monotone_majorant_test(superfact, 5)
    assert v.is_holds
    assert v.certified_bound <= 10  # n(5) found at a small start index


# ---------------------------------------------------------------------------
# averaged-tail quantity


def test_uw_geom_exact(geom05):
    report = uw_quantity(geom05)
    v = report.verdict
    assert v.is_holds
    assert abs(v.certified_bound - 2.0) <= 1e-9
    assert v.empirical_sup == pytest.approx(2.0, abs=1e-9)
    # u_m = 2/m exactly: spot-check the formula behind the certificate
    assert empirical_uw(geom05, 1, 2000) == pytest.approx(2.0, abs=1e-12)
    assert empirical_uw(geom05, 4, 2000) == pytest.approx(0.5, abs=1e-12)


def test_uw_block313_bounded(block313):
    report = uw_quantity(block313)
    assert report.verdict.is_holds
    assert report.verdict.certified_bound <= 2.0 + 1e-12


def test_uw_block413_fails(block413a2):
    report = uw_quantity(block413a2)
    v = report.verdict
    assert v.is_fails
    assert v.witness is not None
    # witness sits at a block start m = 2^i + 1 (far out: analytic route)
    m = v.witness.index
    assert m >= 3 and (m - 1) & (m - 2) == 0
    assert v.witness.kind == "analytic-lower-bound"
    # independent derivation of the certified lower envelope: keep only the
    # cross-block mass, bound the block sum by its integral, and divide by
    # the denominator at the block start:
    #   u_m >= i (i/(i+1))^(alpha-1) 2^i / ((alpha-1)(2^i+1)),  m = 2^i + 1
    env = block413a2.uw_lower
    alpha = 2.0
    for i in range(3, 41):
        expected = (i * (i / (i + 1.0)) ** (alpha - 1.0) * 2.0 ** i
                    / ((alpha - 1.0) * (2.0 ** i + 1.0)))
        assert math.exp(env.log_value_at(i)) == pytest.approx(expected,
                                                              rel=1e-12)
    assert env.diverging
    # finite enumeration undershoots the certified value only through its
    # truncated cross-block tail; at small i it lands within a factor two
    for i in range(3, 9):
        certified = math.exp(env.log_value_at(i))
        assert empirical_uw(block413a2, 2 ** i + 1) >= certified * 0.5


def test_uw_poly2_bound(poly2):
    report = uw_quantity(poly2)
    assert report.verdict.is_holds
    assert report.verdict.certified_bound <= 4.0 + 1e-12


# ---------------------------------------------------------------------------
# exponent sets and brackets


def test_rw_membership_poly2(poly2):
    assert rw_membership(poly2, 0.5).is_holds
    assert rw_membership(poly2, 1.0).is_fails
    assert rw_membership(poly2, -3.0).is_holds


def test_rw_membership_block413(block413a2):
    assert rw_membership(block413a2, 1.0).is_fails
    assert rw_membership(block413a2, -0.5).is_holds


def test_t0_poly2(poly2):
    b = t0_estimate(poly2)
    assert b.kind == "bracket"
    assert b.lo <= 1.0 <= b.hi
    assert b.hi - b.lo <= 2e-3


def test_t0_superfact(superfact):
    b = t0_estimate(superfact)
    assert b.kind == "infinite"


def test_t0_loggamma2(loggamma2):
    b = t0_estimate(loggamma2)
    assert b.kind == "bracket"
    assert b.lo <= -1.0 <= b.hi + 1e-9


def test_sw1_poly2(poly2):
    assert sw1_membership(poly2, 2.5).is_holds
    assert sw1_membership(poly2, 1.5).is_fails
    b = s1_estimate(poly2)
    assert b.kind == "bracket"
    assert b.member_side == "hi"
    assert b.lo <= 2.0 <= b.hi
    assert b.point == pytest.approx(2.0, abs=2e-3)


def test_s1_spike(spike):
    b = s1_estimate(spike)
    assert b.kind == "bracket"
    assert b.lo <= 1.0 <= b.hi
    assert b.point == pytest.approx(1.0, abs=2e-3)


def test_s1_block413_open(block413a2):
    b = s1_estimate(block413a2)
    assert b.kind == "bracket"
    assert b.lo <= 1.0 + 1e-9
    assert b.hi >= 1.0 - 2e-3
    # membership is open at the boundary: s = 1 itself is not certified
    assert not sw1_membership(block413a2, 1.0).is_holds


def test_s1_superfact_empty(superfact):
    b = s1_estimate(superfact)
    assert b.kind == "empty"
    assert b.point is None


# ---------------------------------------------------------------------------
# comparison transfer


def test_transfer_continuity_onto_logfactor(poly2):
    v = custom_weight(
        "poly2-logfactor",
        lambda n: -2.0 * math.log(n) - 1.5 * math.log(math.log(n + 1.0)))
    out = comparison_transfer(v, poly2)
    assert out.verdict.is_holds
    assert out.ratio_nonincreasing_from is not None
    assert any(t.property_name == "continuity" for t in out.transfers)


def test_transfer_noncompact_contrapositive(poly2):
    w = custom_weight(
        "harmonic-logsq",
        lambda n: -math.log(n) - 2.0 * math.log(math.log(n + 1.0)))
    out = comparison_transfer(poly2, w)
    kinds = {(t.property_name, t.kind) for t in out.transfers}
    assert ("compactness", "Fails") in kinds


def test_transfer_identity(poly2):
    out = comparison_transfer(poly2, poly2)
    assert out.verdict.is_holds
    assert out.ratio_nonincreasing_from == 1


# ---------------------------------------------------------------------------
# numeric lemmas frozen as regressions


@pytest.mark.parametrize("delta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("m", [2, 10, 100])
def test_pseries_tail_lemma(delta, m):
    """Partial sums of sum_{n>=m} n^(-1-delta) stay below 1/(delta (m-1)^delta)."""
    ns = np.arange(m, 10 ** 7, dtype=np.float64)
    partial = float(np.sum(ns ** (-1.0 - delta)))
    assert partial <= 1.0 / (delta * (m - 1) ** delta)


def test_dyadic_block_harmonic_sums():
    """Own-block harmonic sums sit inside [0.55, 1] for the first 20 blocks."""
    for i in range(1, 21):
        js = np.arange(2 ** i + 1, 2 ** (i + 1) + 1, dtype=np.float64)
        s = float(np.sum(1.0 / js))
        assert 0.55 <= s <= 1.0


# ---------------------------------------------------------------------------
# cross-criterion invariants


RANK = {"Holds": 1, "Fails": -1, "Inconclusive": 0}


@pytest.mark.parametrize("family,params", [
    ("poly", {"alpha": 2.0}), ("geom", {"r": 0.5, "beta": 0.0}),
    ("spike", {}), ("block313", {}), ("block413", {"alpha": 2.0}),
    ("loggamma", {"gamma": 2.0}), ("superfact", {}),
])
def test_refinement_never_flips(family, params):
    w = catalog_weight(family, params)
    for crit in (continuity_criterion, compactness_criterion, uw_quantity):
        kinds = [crit(w, horizon=h).verdict.kind for h in HORIZONS]
        decided = [k for k in kinds if k != "Inconclusive"]
        assert len(set(decided)) <= 1, (family, crit.__name__, kinds)


@pytest.mark.parametrize("family,params", [
    ("poly", {"alpha": 2.0}), ("geom", {"r": 0.5, "beta": 0.0}),
    ("spike", {}), ("block313", {}),
])
def test_certified_dominates_empirical(family, params):
    w = catalog_weight(family, params)
    for crit in (continuity_criterion, uw_quantity):
        for h in HORIZONS:
            v = crit(w, horizon=h).verdict
            if v.is_holds:
                assert v.empirical_sup <= v.certified_bound * (1.0 + 1e-12)


@pytest.mark.parametrize("family,params", [
    ("poly", {"alpha": 2.0}), ("poly", {"alpha": 2.5}),
    ("spike", {}), ("block413", {"alpha": 2.0}),
])
def test_t0_below_s1(family, params):
    w = catalog_weight(family, params)
    t0 = t0_estimate(w)
    s1 = s1_estimate(w)
    if t0.kind == "bracket" and s1.kind == "bracket":
        assert t0.lo <= s1.hi + 1e-9


@pytest.mark.parametrize("family,params", [
    ("poly", {"alpha": 2.0}), ("geom", {"r": 0.5, "beta": 0.0}),
    ("spike", {}), ("block313", {}), ("superfact", {}),
    ("factorial", {"a": 1.0}), ("expbeta", {"beta": 0.5}),
    ("explog", {"gamma": 2.0}),
])
def test_uw_finite_implies_continuity(family, params):
    w = catalog_weight(family, params)
    if uw_quantity(w).verdict.is_holds:
        assert not continuity_criterion(w).verdict.is_fails


def test_suffix_log_sums_matches_direct(poly2):
    targets = np.array([1, 5, 50, 500], dtype=np.int64)

    def log_term(ns):
        return poly2.log_eval(ns) - np.log(ns.astype(float))

    got = suffix_log_sums(log_term, 10 ** 4, targets)
    for t, g in zip(targets, got):
        ns = np.arange(t, 10 ** 4 + 1, dtype=np.int64)
        direct = float(np.sum(np.exp(log_term(ns))))
        assert math.exp(g) == pytest.approx(direct, rel=1e-12)


def test_witness_reproducibility(loggamma1, block413a2):
    v1 = continuity_criterion(loggamma1).verdict
    assert v1.witness.index >= 1
    # diverging inner series: partial sums outgrow any fixed multiple
    w = loggamma1
    ns = np.arange(v1.witness.index, 10 ** 6, dtype=np.int64)
    partial = float(np.sum(np.exp(w.log_eval(ns)) / ns.astype(float)))
    assert partial / math.exp(w.log_eval(v1.witness.index)) >= 1.0

    v2 = compactness_criterion(block413a2).verdict
    assert v2.is_fails and v2.witness is not None
    # liminf witness: the quantity at the witness index meets the bound
    idx = v2.witness.index
    if idx <= 10 ** 5:
        assert empirical_continuity(block413a2, idx) >= \
            v2.witness.value * (1.0 - 1e-9)
