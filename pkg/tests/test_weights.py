"""Weight catalog: evaluation oracles, certified tails, metadata soundness."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cesaro.weights import (
    UNDERFLOW,
    WeightError,
    build_compact_minorant,
    build_failing_minorant,
    catalog_families,
    catalog_weight,
    custom_weight,
    eval_weight,
    load_weight_table,
    parse_weight,
    tail_bound,
)
from cesaro.criteria import continuity_criterion


# ---------------------------------------------------------------------------
# pointwise evaluation oracles


@pytest.mark.parametrize("family,params,n,value", [
    ("poly", {"alpha": 2.0}, 3, 1.0 / 9.0),
    ("poly", {"alpha": 0.5}, 4, 0.5),
    ("loggamma", {"gamma": 2.0}, 1, 1.0 / math.log(2.0) ** 2),
    ("geom", {"r": 0.5, "beta": 0.0}, 4, 1.0 / 16.0),
    ("geom", {"r": 0.5, "beta": 3.0}, 2, 2.0),
    ("superfact", {}, 3, 1.0 / 27.0),
    ("factorial", {"a": 1.0}, 4, 1.0 / 24.0),
    ("expbeta", {"beta": 0.5}, 4, math.exp(-2.0)),
    ("explog", {"gamma": 2.0}, 2, math.exp(-math.log(2.0) ** 2)),
    ("spike", {}, 4, 1.0),
    ("spike", {}, 5, 0.2),
    ("spike", {}, 1, 1.0),
    ("block313", {}, 2, 1.0),
    ("block313", {}, 3, 2.0 ** -9),
    ("block313", {}, 4, 2.0 ** -9),
    ("block313", {}, 5, 2.0 ** -26),
    ("block313", {}, 8, 2.0 ** -26),
    ("block413", {"alpha": 2.0}, 2, 1.0),
    ("block413", {"alpha": 2.0}, 3, 1.0),
    ("block413", {"alpha": 2.0}, 5, 1.0 / 8.0),
    ("block413", {"alpha": 2.0}, 9, 1.0 / 36.0),
    ("block413", {"alpha": 2.0}, 16, 1.0 / 36.0),
])
def test_eval_oracles(family, params, n, value):
    w = catalog_weight(family, params)
    assert math.exp(w.log_eval(n)) == pytest.approx(value, rel=1e-12)


def test_array_eval_matches_scalar():
    ns = np.arange(1, 200, dtype=np.int64)
    for family, params in [("poly", {"alpha": 1.5}), ("spike", {}),
                           ("block313", {}), ("block413", {"alpha": 2.0}),
                           ("geom", {"r": 0.3, "beta": 1.0}),
                           ("superfact", {}), ("loggamma", {"gamma": 1.0})]:
        w = catalog_weight(family, params)
        arr = w.log_eval(ns)
        scalars = np.array([w.log_eval(int(n)) for n in ns])
        assert np.allclose(arr, scalars, rtol=1e-13, atol=1e-13)


def test_eval_rejects_nonpositive_index(poly2):
    with pytest.raises(ValueError):
        poly2.log_eval(0)


def test_underflow_marker():
    w = catalog_weight("superfact")
    logv, linear = eval_weight(w, 200)
    assert math.isfinite(logv)
    assert linear is UNDERFLOW


# ---------------------------------------------------------------------------
# grammar and custom tables


def test_parse_weight_roundtrip():
    assert parse_weight("poly:alpha=2").id == "poly:alpha=2"
    assert parse_weight(" geom:r=0.5 ").id == "geom:r=0.5,beta=0"
    assert parse_weight("superfact").id == "superfact"


@pytest.mark.parametrize("bad", [
    "", "nosuchfamily", "poly", "poly:alpha=two", "poly:alpha",
    "poly:beta=2", "geom:r=2", "loggamma:gamma=0", "block413:alpha=1",
])
def test_parse_weight_rejects(bad):
    with pytest.raises(WeightError):
        parse_weight(bad)


def test_load_weight_table(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("1 0.0\n2 -0.5\n3 -1.0\n")
    w = load_weight_table(str(path))
    assert w.log_eval(2) == -0.5
    assert w.table_size == 3
    gap = tmp_path / "gap.txt"
    gap.write_text("1 0.0\n3 -1.0\n")
    with pytest.raises(WeightError):
        load_weight_table(str(gap))


def test_parse_custom_grammar(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("1 0.0\n2 -1.0\n")
    w = parse_weight(f"custom:path={path}")
    assert w.log_eval(2) == -1.0


def test_custom_weight_metadata():
    w = custom_weight("mine", lambda n: -float(n), ratio_bound=(1, 0.5),
                      is_summable=True)
    assert w.log_eval(3) == -3.0
    assert w.ratio_bound == (1, 0.5)
    assert w.log_tail(1, 1.0) is not None


def test_catalog_families_listing():
    fams = catalog_families()
    names = {f["family"] for f in fams}
    assert names == {"poly", "loggamma", "geom", "superfact", "factorial",
                     "expbeta", "explog", "spike", "block313", "block413"}
    for f in fams:
        assert isinstance(f["params"], list) and isinstance(f["doc"], str)


# ---------------------------------------------------------------------------
# certified tail bounds


TAIL_CASES = [
    ("poly", {"alpha": 2.0}, 1, 0.0),
    ("poly", {"alpha": 2.0}, 10, 0.0),
    ("poly", {"alpha": 2.0}, 2, -1.0),
    ("geom", {"r": 0.5, "beta": 0.0}, 1, 1.0),
    ("geom", {"r": 0.5, "beta": 0.0}, 5, 0.0),
    ("superfact", {}, 1, 1.0),
    ("superfact", {}, 3, 5.0),
    ("factorial", {"a": 1.0}, 2, 1.0),
    ("spike", {}, 1, 0.0),
    ("spike", {}, 17, 0.5),
    ("block313", {}, 1, 1.0),
    ("block313", {}, 9, 0.0),
    ("block413", {"alpha": 2.0}, 1, 1.0),
    ("block413", {"alpha": 2.0}, 6, 0.5),
    ("loggamma", {"gamma": 2.0}, 2, 0.0),
]


@pytest.mark.parametrize("family,params,m,beta", TAIL_CASES)
def test_tail_bound_soundness(family, params, m, beta):
    """Certified tails dominate direct partial sums at every horizon."""
    w = catalog_weight(family, params)
    bound = tail_bound(w, m, beta)
    assert bound is not None
    ns = np.arange(m, 10 ** 5, dtype=np.int64)
    terms = np.exp(w.log_eval(ns) + (beta - 1.0) * np.log(ns.astype(float)))
    partial = float(np.sum(terms))
    assert partial <= bound * (1.0 + 1e-12)


def test_tail_bound_exact_value_geom(geom05):
    # sum_{n>=3} 2^-n / n = ln 2 - 1/2 - 1/8 exactly; the certified route
    # majorizes 1/n by 1/3 across the tail, landing at 1/12 exactly
    exact = math.log(2.0) - 0.5 - 0.125
    bound = tail_bound(geom05, 3, 0.0)
    assert bound >= exact
    assert bound == pytest.approx(1.0 / 12.0, rel=1e-10)


def test_tail_absent_when_divergent(loggamma1, spike):
    assert tail_bound(loggamma1, 1, 0.0) is None
    assert spike.diverges_beta(1.0) is True


def test_decreasing_metadata_sound():
    for family, params in [("poly", {"alpha": 2.0}),
                           ("geom", {"r": 0.5, "beta": 0.0}),
                           ("superfact", {}), ("factorial", {"a": 1.0}),
                           ("loggamma", {"gamma": 1.0}),
                           ("block413", {"alpha": 2.0})]:
        w = catalog_weight(family, params)
        if w.decreasing_from is None:
            continue
        ns = np.arange(w.decreasing_from, w.decreasing_from + 3000,
                       dtype=np.int64)
        logs = w.log_eval(ns)
        assert np.all(np.diff(logs) <= 1e-15), (family, params)


@given(alpha=st.floats(min_value=0.2, max_value=5.0),
       n=st.integers(min_value=1, max_value=10 ** 9))
@settings(max_examples=60, deadline=None)
def test_poly_eval_property(alpha, n):
    w = catalog_weight("poly", {"alpha": alpha})
    assert w.log_eval(n) == pytest.approx(-alpha * math.log(n), abs=1e-9)


@given(m=st.integers(min_value=1, max_value=3000),
       beta=st.floats(min_value=-2.0, max_value=1.0))
@settings(max_examples=40, deadline=None)
def test_geom_tail_property(m, beta):
    w = catalog_weight("geom", {"r": 0.5, "beta": 0.0})
    bound = tail_bound(w, m, beta)
    assert bound is not None
    ns = np.arange(m, m + 4000, dtype=np.int64)
    partial = float(np.sum(np.exp(
        w.log_eval(ns) + (beta - 1.0) * np.log(ns.astype(float)))))
    assert partial <= bound * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# constructed minorants


def test_failing_minorant_shape(poly1):
    v = build_failing_minorant(poly1).to_weight_spec()
    ns = np.arange(1, 20000, dtype=np.int64)
    logs_v = v.log_eval(ns)
    logs_orig = poly1.log_eval(ns)
    assert np.all(logs_v <= logs_orig + 1e-12)
    assert np.all(np.diff(logs_v) <= 1e-15)


def test_failing_minorant_block_growth(poly1):
    """Completed blocks push the averaged tail past each integer level."""
    table = build_failing_minorant(poly1)
    for j, s in enumerate(table.block_harmonic_sums, start=1):
        assert s > j
    v = table.to_weight_spec()
    env = v.cont_lower
    assert env is not None and env.diverging
    top = env.max_index or 5
    for i in range(1, min(top, 6) + 1):
        idx = env.index_at(i)
        certified = math.exp(env.log_value_at(i))
        ns = np.arange(idx, 10 ** 6, dtype=np.int64)
        partial = float(np.sum(
            np.exp(v.log_eval(ns)) / ns.astype(float)))
        partial /= math.exp(v.log_eval(idx))
        assert partial >= certified * (1.0 - 1e-9)


def test_failing_minorant_continuity_fails(poly1):
    report = continuity_criterion(
        build_failing_minorant(poly1).to_weight_spec())
    assert report.verdict.is_fails
    assert report.verdict.witness is not None


def test_compact_minorant_recursion(poly2):
    u = build_compact_minorant(poly2)
    ns = np.arange(1, 5000, dtype=np.int64)
    logs_u = u.log_eval(ns)
    assert np.all(logs_u <= poly2.log_eval(ns) + 1e-12)
    # recursion inequality: u(n+1) <= u(n)/(n+1), up to log-domain roundoff
    step = logs_u[1:] - logs_u[:-1]
    assert np.all(step <= -np.log(ns[1:].astype(float)) + 1e-10)


def test_spike_not_c0_yet_continuous(spike):
    """Spikes stay at height one along powers of two, yet the sup closes."""
    for k in range(1, 30):
        assert spike.log_eval(2 ** k) == 0.0
    report = continuity_criterion(spike)
    assert report.verdict.is_holds
    assert report.verdict.certified_bound <= math.pi ** 2 / 6.0 + 3.0
