"""Certified three-valued verdicts for scalar summability and boundedness tests.

Every criterion here has the same shape: a nonnegative quantity indexed by the
positive integers whose supremum (or limit, or series sum) must be classified.
Finite scanning alone cannot decide an infinite supremum, so each verdict
separates what was proved from what was merely sampled:

``Holds``
    A finite certified bound exists.  It combines an analytic sup-envelope
    declared by the weight with per-index tail closures of the scanned head,
    so it dominates the true supremum, not just the sampled values.

``Fails``
    A certified divergence route fired: the inner series is known to diverge,
    a certified lower envelope grows without bound, or partial sums crossed
    the configured growth threshold (the heuristic route, always labelled).

``Inconclusive``
    Neither certificate applies; the empirical scan is still reported.

Raising the horizon only sharpens empirical data or resolves an
``Inconclusive``; certified verdicts never flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .weights import (
    NEG_INF,
    LowerEnvelope,
    SupEnvelope,
    WeightSpec,
    _log_pseries_tail,
)

__all__ = [
    "DEFAULT_HORIZON",
    "Witness",
    "Verdict",
    "CriterionReport",
    "Bracket",
    "TransferRecord",
    "ComparisonOutcome",
    "SupProfile",
    "scan_indices",
    "suffix_log_sums",
    "evaluate_sup_profile",
    "continuity_criterion",
    "compactness_criterion",
    "ratio_limsup_test",
    "monotone_majorant_test",
    "uw_quantity",
    "rw_membership",
    "t0_estimate",
    "sw1_membership",
    "s1_estimate",
    "comparison_transfer",
]

DEFAULT_HORIZON = 10**6
#: every index up to here is scanned; beyond it the grid is geometric
DENSE_SCAN_LIMIT = 10**4
GEOMETRIC_STEP = 1.05
#: chunk length for streaming suffix sums
_CHUNK = 1 << 19
#: partial sums this many times the first term count as divergence evidence
DIVERGENCE_FACTOR = 1.0e6
_LOG_DIVERGENCE = math.log(DIVERGENCE_FACTOR)
#: the top half of the scan must still carry this share of the partial sum
TOP_SHARE_MIN = 0.01
#: diverging lower envelopes are walked until the certified value reaches this
WITNESS_TARGET = 100.0
BISECTION_TOL = 1.0e-3
PROBE_CEILING = 64.0
#: bracket estimates probe memberships at this reduced horizon
ESTIMATE_HORIZON = 10**5
_BOUND_SLACK = 1.0 + 1e-9
_HUGE = 1.0e300
_LOG_HUGE = math.log(_HUGE)
#: widest admissible prefix that must be certified index-by-index
_BRIDGE_CAP = 10**6
_MONOTONE_EPS = 1e-12


def _exp_clamped(a):
    return np.exp(np.minimum(a, _LOG_HUGE))


def _exp_clamped_scalar(a: float) -> float:
    return math.exp(min(a, _LOG_HUGE))


# ---------------------------------------------------------------------------
# verdict types


@dataclass(frozen=True)
class Witness:
    """A reproducible index/value pair backing a Fails verdict.

    ``kind`` names the route that produced it:

    * ``analytic-lower-bound``   certified lower envelope, grows without bound
    * ``liminf-lower-bound``     certified lower envelope, positive constant
    * ``diverging-inner-series`` the summed series itself is certifiably infinite
    * ``partial-sum-growth``     heuristic threshold route
    * ``sup-exceeds``            scanned value crossed the growth threshold
    * ``monotonicity-violation`` a late increase in a required decreasing tail
    """

    index: int
    value: float
    kind: str
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "index": int(self.index),
            "value": float(self.value),
            "kind": self.kind,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Verdict:
    """Three-valued certified outcome of one criterion evaluation."""

    kind: str  # 'Holds' | 'Fails' | 'Inconclusive'
    certified_bound: Optional[float]
    witness: Optional[Witness]
    empirical_sup: float
    scan_horizon: int
    notes: tuple = ()

    @property
    def is_holds(self) -> bool:
        return self.kind == "Holds"

    @property
    def is_fails(self) -> bool:
        return self.kind == "Fails"

    @property
    def is_inconclusive(self) -> bool:
        return self.kind == "Inconclusive"

    @classmethod
    def holds(cls, certified_bound, empirical_sup, horizon, notes=()):
        return cls("Holds", float(certified_bound), None, float(empirical_sup),
                   int(horizon), tuple(notes))

    @classmethod
    def fails(cls, witness, empirical_sup, horizon, notes=()):
        return cls("Fails", None, witness, float(empirical_sup), int(horizon),
                   tuple(notes))

    @classmethod
    def inconclusive(cls, empirical_sup, horizon, notes=()):
        return cls("Inconclusive", None, None, float(empirical_sup),
                   int(horizon), tuple(notes))

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "certified_bound": None if self.certified_bound is None
            else float(self.certified_bound),
            "witness": None if self.witness is None else self.witness.to_json_dict(),
            "empirical_sup": float(self.empirical_sup),
            "scan_horizon": int(self.scan_horizon),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class CriterionReport:
    """A verdict plus the sparse sample trace that produced it."""

    criterion: str
    params: dict
    verdict: Verdict
    samples: tuple  # ((index, value), ...)
    horizon: int

    def to_json_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "params": dict(self.params),
            "verdict": self.verdict.to_json_dict(),
            "samples": [{"n": int(n), "value": float(v)} for n, v in self.samples],
            "horizon": int(self.horizon),
        }


@dataclass(frozen=True)
class Bracket:
    """Outcome of a boundary estimate for a one-sided exponent set.

    ``kind`` is ``bracket`` (both endpoints certified), ``infinite`` (every
    probed exponent is in the set), ``empty`` (certified empty set), or
    ``inconclusive``.  ``member_side`` says which endpoint carries certified
    membership: ``lo`` for downward-closed sets, ``hi`` for upward-closed.
    """

    kind: str
    lo: Optional[float] = None
    hi: Optional[float] = None
    member_side: Optional[str] = None
    lo_verdict: Optional[Verdict] = None
    hi_verdict: Optional[Verdict] = None
    tol: Optional[float] = None
    notes: tuple = ()

    @property
    def resolved(self) -> bool:
        return self.kind in ("bracket", "infinite", "empty")

    @property
    def point(self) -> Optional[float]:
        """The certified-membership endpoint (None unless kind == 'bracket')."""
        if self.kind != "bracket":
            return None
        return self.hi if self.member_side == "hi" else self.lo

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lo": self.lo,
            "hi": self.hi,
            "member_side": self.member_side,
            "tol": self.tol,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class TransferRecord:
    property_name: str  # 'continuity' | 'compactness'
    source: str
    target: str
    kind: str
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "property": self.property_name,
            "source": self.source,
            "target": self.target,
            "kind": self.kind,
            "note": self.note,
        }


@dataclass(frozen=True)
class ComparisonOutcome:
    """Result of a ratio-monotonicity transfer between two weights.

    The headline ``verdict`` states what was transferred onto the first
    weight's continuity; ``transfers`` records every direction that fired,
    including contrapositive ones.
    """

    verdict: Verdict
    ratio_nonincreasing_from: Optional[int]
    transfers: tuple = ()
    notes: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict.to_json_dict(),
            "ratio_nonincreasing_from": self.ratio_nonincreasing_from,
            "transfers": [t.to_json_dict() for t in self.transfers],
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# scan grid and streaming suffix sums


def scan_indices(horizon: int) -> np.ndarray:
    """Deterministic scan grid: dense head, geometric spacing, and the
    power-of-two edges where block-structured weights peak."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    dense_top = min(horizon, DENSE_SCAN_LIMIT)
    idx = set(range(1, dense_top + 1))
    n = dense_top
    while n < horizon:
        n = min(max(n + 1, int(n * GEOMETRIC_STEP)), horizon)
        idx.add(n)
    i = 1
    while (1 << i) - 1 <= horizon:
        for edge in ((1 << i) - 1, (1 << i), (1 << i) + 1):
            if 1 <= edge <= horizon:
                idx.add(edge)
        i += 1
    return np.array(sorted(idx), dtype=np.int64)


def suffix_log_sums(log_term: Callable[[np.ndarray], np.ndarray], horizon: int,
                    targets: np.ndarray) -> np.ndarray:
    """log of sum_{n=m}^{horizon} exp(log_term(n)) for each target m.

    Targets must be ascending positive integers; targets beyond the horizon
    get -inf (empty suffix).  The accumulation runs entirely in the log
    domain, so dynamic ranges far beyond float64 cannot corrupt the result.
    """
    targets = np.asarray(targets, dtype=np.int64)
    out = np.full(targets.shape, NEG_INF, dtype=float)
    if horizon < 1 or targets.size == 0:
        return out
    tmin = int(targets[0])
    carry = NEG_INF
    hi = horizon
    while hi >= 1 and hi >= tmin:
        lo = max(1, tmin, hi - _CHUNK + 1)
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        lt = np.asarray(log_term(ns), dtype=float)
        acc = np.logaddexp.accumulate(lt[::-1])[::-1]
        sel = (targets >= lo) & (targets <= hi)
        if np.any(sel):
            out[sel] = np.logaddexp(acc[targets[sel] - lo], carry)
        carry = float(np.logaddexp(acc[0], carry))
        hi = lo - 1
    return out


# ---------------------------------------------------------------------------
# the shared sup-criterion engine


@dataclass(frozen=True)
class SupProfile:
    """One sup-type criterion: quantity(m) = inner-series(m) / denominator(m).

    The inner series sums ``inner(n) * n**(beta-1)`` for n from
    ``m + start_offset`` to infinity; ``log_denominator`` maps an index array
    to log-denominators.  ``envelope``/``lower``/``diverges`` carry the
    weight's certified metadata for this quantity.
    """

    name: str
    inner: WeightSpec
    beta: float
    start_offset: int
    log_denominator: Callable[[np.ndarray], np.ndarray]
    envelope: Optional[SupEnvelope] = None
    lower: Optional[LowerEnvelope] = None
    diverges: Optional[bool] = None
    diverges_note: str = ""


@dataclass
class _ScanData:
    scan: np.ndarray
    starts: np.ndarray
    suffix_log: np.ndarray
    den_log: np.ndarray
    partial_log: np.ndarray
    closed_log: Optional[np.ndarray]
    tail_log: Optional[float]
    log_term: Callable[[np.ndarray], np.ndarray]


def _inner_log_term(inner: WeightSpec, beta: float):
    if beta == 1.0:
        def log_term(ns):
            return np.asarray(inner.log_eval(ns), dtype=float)
    else:
        def log_term(ns):
            ns = np.asarray(ns)
            return (np.asarray(inner.log_eval(ns), dtype=float)
                    + (beta - 1.0) * np.log(ns.astype(float)))
    return log_term


def _scan_sup_quantity(profile: SupProfile, horizon: int) -> _ScanData:
    scan = scan_indices(horizon)
    starts = scan + profile.start_offset
    log_term = _inner_log_term(profile.inner, profile.beta)
    suffix_log = suffix_log_sums(log_term, horizon, starts)
    den_log = np.asarray(profile.log_denominator(scan), dtype=float)
    partial_log = suffix_log - den_log
    partial_log = np.where(np.isnan(partial_log), NEG_INF, partial_log)
    tail_log = profile.inner.log_tail(horizon + 1, profile.beta)
    if tail_log is not None and tail_log < float("inf"):
        closed_log = np.logaddexp(suffix_log, tail_log) - den_log
        closed_log = np.where(np.isnan(closed_log), NEG_INF, closed_log)
    else:
        closed_log = None
        tail_log = None
    return _ScanData(scan, starts, suffix_log, den_log, partial_log,
                     closed_log, tail_log, log_term)


def _witness_from_lower(lower: LowerEnvelope, kind: str) -> Witness:
    """Walk a certified lower envelope out to a representative witness.

    Diverging envelopes are walked (doubling) until the certified value
    reaches WITNESS_TARGET; constant ones use a fixed deep level.  Indices may
    be huge integers; only the certified value matters for reproducibility.
    """
    if lower.diverging:
        target = math.log(WITNESS_TARGET)
        level = 1
        best_level = 1
        best_log = lower.log_value_at(1)
        iters = 0
        while True:
            if lower.max_index is not None and level > lower.max_index:
                cap = lower.max_index
                lg = lower.log_value_at(cap)
                if lg > best_log:
                    best_log, best_level = lg, cap
                break
            lg = lower.log_value_at(level)
            if lg > best_log:
                best_log, best_level = lg, level
            iters += 1
            if lg >= target or level > 10**45 or iters >= 160:
                break
            level *= 2
        idx = lower.index_at(best_level)
        lg = lower.log_value_at(best_level)
        detail = lower.note
        if detail:
            detail += "; "
        detail += "certified lower bound grows without bound along this subsequence"
        return Witness(int(idx), _exp_clamped_scalar(lg), kind, detail)
    level = 100
    if lower.max_index is not None:
        level = min(level, lower.max_index)
    idx = lower.index_at(level)
    lg = lower.log_value_at(level)
    detail = lower.note
    if detail:
        detail += "; "
    detail += "subsequence stays above a positive certified constant"
    return Witness(int(idx), _exp_clamped_scalar(lg), kind, detail)


def _diverging_series_witness(profile: SupProfile, data: _ScanData) -> Witness:
    value = _exp_clamped_scalar(float(data.partial_log[0]))
    detail = ("summed series is certified divergent, so the quantity is "
              "infinite at every index; the value shown is the partial sum "
              "at the scan horizon")
    if profile.diverges_note:
        detail += " (" + profile.diverges_note + ")"
    return Witness(int(data.scan[0]), value, "diverging-inner-series", detail)


def _growth_witness(profile: SupProfile, data: _ScanData,
                    horizon: int) -> Optional[Witness]:
    """Heuristic divergence: inner partial sums dwarf their first term while
    the top half of the scan still contributes; both conditions recorded."""
    starts = data.starts
    in_range = starts <= horizon
    if not np.any(in_range):
        return None
    first_lt = np.full(starts.shape, NEG_INF)
    first_lt[in_range] = np.asarray(
        data.log_term(starts[in_range]), dtype=float)
    with np.errstate(invalid="ignore"):
        ratio = data.suffix_log - first_lt
    ratio = np.where(np.isnan(ratio), 0.0, ratio)
    mid_pos = int(np.searchsorted(starts, horizon // 2 + 1))
    if mid_pos >= len(starts):
        return None
    top_log = float(data.suffix_log[mid_pos])
    below_mid = starts < starts[mid_pos]
    share_ok = top_log >= math.log(TOP_SHARE_MIN) + data.suffix_log
    trigger = in_range & below_mid & share_ok & (ratio >= _LOG_DIVERGENCE)
    if not np.any(trigger):
        return None
    i0 = int(np.argmax(trigger))
    value = _exp_clamped_scalar(float(data.partial_log[i0]))
    detail = (f"inner partial sum exceeds {DIVERGENCE_FACTOR:.0e} times its "
              f"first term and the top half of the scan still carries at "
              f"least {TOP_SHARE_MIN:.0%} of it; heuristic evidence, not an "
              f"analytic certificate")
    return Witness(int(data.scan[i0]), value, "partial-sum-growth", detail)


def _certified_sup_log(profile: SupProfile, data: _ScanData, horizon: int,
                       notes: list) -> Optional[float]:
    """Certified log bound on the full supremum, or None.

    Combines the declared envelope (valid beyond some index) with closed
    per-index values on the dense prefix below it.
    """
    env = profile.envelope
    if env is None:
        return None
    if env.valid_from > horizon:
        notes.append("sup envelope starts beyond the scan horizon; raise the "
                     "horizon to certify")
        return None
    if env.valid_from - 1 > _BRIDGE_CAP:
        notes.append("sup envelope starts too late to certify the prefix "
                     "index-by-index")
        return None
    pieces = [env.log_sup]
    if env.valid_from > 1:
        if data.tail_log is None:
            notes.append("no certified tail closure; indices below the "
                         "envelope start cannot be certified")
            return None
        bridge = np.arange(1, env.valid_from, dtype=np.int64)
        bsuffix = suffix_log_sums(data.log_term, horizon,
                                  bridge + profile.start_offset)
        bden = np.asarray(profile.log_denominator(bridge), dtype=float)
        bclosed = np.logaddexp(bsuffix, data.tail_log) - bden
        bclosed = np.where(np.isnan(bclosed), NEG_INF, bclosed)
        pieces.append(float(np.max(bclosed)))
    if data.closed_log is not None:
        pieces.append(float(np.max(data.closed_log)))
    if env.note:
        notes.append("sup envelope: " + env.note)
    return max(pieces)


def _sup_verdict(profile: SupProfile, data: _ScanData,
                 horizon: int) -> tuple[Verdict, np.ndarray, bool]:
    """Returns (verdict, per-scan log values used for samples, tail_closed)."""
    notes: list = []
    if profile.diverges is True:
        w = _diverging_series_witness(profile, data)
        emp = float(np.max(_exp_clamped(data.partial_log)))
        notes.append("samples are partial sums up to the horizon")
        return (Verdict.fails(w, emp, horizon, notes), data.partial_log, False)
    if profile.lower is not None and profile.lower.diverging:
        w = _witness_from_lower(profile.lower, "analytic-lower-bound")
        emp = float(np.max(_exp_clamped(data.partial_log)))
        notes.append("samples are partial sums up to the horizon")
        return (Verdict.fails(w, emp, horizon, notes), data.partial_log, False)

    cert_notes: list = []
    cert_log = _certified_sup_log(profile, data, horizon, cert_notes)
    if cert_log is not None:
        if data.closed_log is not None:
            used = data.closed_log
            tail_closed = True
            cert_notes.append("samples include the certified tail closure "
                              "beyond the horizon")
        else:
            used = data.partial_log
            tail_closed = False
            cert_notes.append("samples are partial sums up to the horizon")
        emp = float(np.max(_exp_clamped(used)))
        bound = _exp_clamped_scalar(cert_log)
        if emp > bound * _BOUND_SLACK:
            notes.extend(cert_notes)
            notes.append("scan contradicts the declared envelope; refusing "
                         "to certify (metadata may be wrong)")
            return (Verdict.inconclusive(emp, horizon, notes), used, tail_closed)
        return (Verdict.holds(max(bound, emp), emp, horizon, cert_notes),
                used, tail_closed)
    notes.extend(cert_notes)

    gw = _growth_witness(profile, data, horizon)
    emp = float(np.max(_exp_clamped(data.partial_log)))
    notes.append("samples are partial sums up to the horizon")
    if gw is not None:
        return (Verdict.fails(gw, emp, horizon, notes), data.partial_log, False)
    notes.append("no certificate in either direction at this horizon")
    return (Verdict.inconclusive(emp, horizon, notes), data.partial_log, False)


def _thin_samples(scan: np.ndarray, log_vals: np.ndarray, cap: int = 400):
    n = len(scan)
    keep = {0, n - 1, int(np.argmax(log_vals))}
    step = max(1, n // cap)
    keep.update(range(0, n, step))
    return tuple((int(scan[i]), float(_exp_clamped_scalar(float(log_vals[i]))))
                 for i in sorted(keep))


def evaluate_sup_profile(profile: SupProfile, horizon: int,
                         params: Optional[dict] = None) -> CriterionReport:
    """Scan, certify, and package one sup-type criterion."""
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    data = _scan_sup_quantity(profile, horizon)
    verdict, used_log, _ = _sup_verdict(profile, data, horizon)
    samples = _thin_samples(data.scan, used_log)
    p = dict(params or {})
    p.setdefault("weight", profile.inner.id)
    p.setdefault("horizon", int(horizon))
    return CriterionReport(profile.name, p, verdict, samples, int(horizon))


# ---------------------------------------------------------------------------
# continuity and compactness


def _is_same_weight(v: WeightSpec, w: WeightSpec) -> bool:
    return v is w or v.id == w.id


def _continuity_profile(v: WeightSpec, w: WeightSpec) -> SupProfile:
    same = _is_same_weight(v, w)

    def den(ms: np.ndarray) -> np.ndarray:
        return np.asarray(v.log_eval(ms), dtype=float)

    return SupProfile(
        name="continuity",
        inner=w,
        beta=0.0,
        start_offset=0,
        log_denominator=den,
        envelope=v.cont_env(1) if same else None,
        lower=v.cont_lower if same else None,
        diverges=w.diverges_beta(0.0),
        diverges_note="sum of weight(n)/n diverges",
    )


def continuity_criterion(v: WeightSpec, w: Optional[WeightSpec] = None,
                         horizon: int = DEFAULT_HORIZON) -> CriterionReport:
    """Certify sup over n of (1/v(n)) * sum_{m>=n} w(m)/m.

    Holds means the averaging operator maps the w-weighted summable space
    boundedly into the v-weighted one, and the certified bound equals its
    operator norm bound.  With one argument, v = w.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    w = v if w is None else w
    profile = _continuity_profile(v, w)
    report = evaluate_sup_profile(profile, horizon,
                                  {"v": v.id, "w": w.id, "horizon": int(horizon)})
    if report.verdict.is_holds:
        verdict = Verdict(
            report.verdict.kind, report.verdict.certified_bound,
            report.verdict.witness, report.verdict.empirical_sup,
            report.verdict.scan_horizon,
            report.verdict.notes + (
                "certified bound dominates the operator norm of the "
                "averaging operator between the weighted spaces",),
        )
        report = CriterionReport(report.criterion, report.params, verdict,
                                 report.samples, report.horizon)
    return report


def compactness_criterion(v: WeightSpec, w: Optional[WeightSpec] = None,
                          horizon: int = DEFAULT_HORIZON) -> CriterionReport:
    """Certify that (1/v(n)) * sum_{m>=n} w(m)/m tends to zero.

    Holds requires a certified vanishing envelope; Fails requires either a
    certified positive lower bound along a subsequence or outright divergence.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    w = v if w is None else w
    profile = _continuity_profile(v, w)
    data = _scan_sup_quantity(profile, horizon)
    params = {"v": v.id, "w": w.id, "horizon": int(horizon)}
    notes: list = []
    used_log = data.partial_log

    if profile.diverges is True:
        wit = _diverging_series_witness(profile, data)
        emp = float(np.max(_exp_clamped(used_log)))
        notes.append("quantity is infinite at every index, so it cannot vanish")
        verdict = Verdict.fails(wit, emp, horizon, notes)
    elif profile.lower is not None and profile.lower.diverging:
        wit = _witness_from_lower(profile.lower, "analytic-lower-bound")
        emp = float(np.max(_exp_clamped(used_log)))
        notes.append("quantity grows without bound along a certified "
                     "subsequence, so it cannot vanish")
        verdict = Verdict.fails(wit, emp, horizon, notes)
    elif profile.lower is not None:
        wit = _witness_from_lower(profile.lower, "liminf-lower-bound")
        emp = float(np.max(_exp_clamped(used_log)))
        notes.append("a certified subsequence stays above a positive "
                     "constant, so the quantity does not vanish")
        verdict = Verdict.fails(wit, emp, horizon, notes)
    else:
        env = profile.envelope
        if env is not None and env.vanishes:
            cert_notes: list = []
            cert_log = _certified_sup_log(profile, data, horizon, cert_notes)
            if cert_log is not None:
                if data.closed_log is not None:
                    used_log = data.closed_log
                    cert_notes.append("samples include the certified tail "
                                      "closure beyond the horizon")
                emp = float(np.max(_exp_clamped(used_log)))
                bound = _exp_clamped_scalar(cert_log)
                if emp > bound * _BOUND_SLACK:
                    notes = cert_notes + ["scan contradicts the declared "
                                          "envelope; refusing to certify"]
                    verdict = Verdict.inconclusive(emp, horizon, notes)
                else:
                    cert_notes.append("certified envelope vanishes, so the "
                                      "quantity tends to zero")
                    verdict = Verdict.holds(max(bound, emp), emp, horizon,
                                            cert_notes)
            else:
                notes = cert_notes + ["vanishing envelope exists but the "
                                      "prefix could not be certified"]
                emp = float(np.max(_exp_clamped(used_log)))
                verdict = Verdict.inconclusive(emp, horizon, notes)
        else:
            gw = _growth_witness(profile, data, horizon)
            emp = float(np.max(_exp_clamped(used_log)))
            if gw is not None:
                notes.append("quantity shows certified-threshold growth")
                verdict = Verdict.fails(gw, emp, horizon, notes)
            else:
                notes.append("no vanishing envelope and no lower bound "
                             "metadata at this horizon")
                verdict = Verdict.inconclusive(emp, horizon, notes)

    samples = _thin_samples(data.scan, used_log)
    return CriterionReport("compactness", params, verdict, samples,
                           int(horizon))


# ---------------------------------------------------------------------------
# ratio test and monotone majorant probe


def ratio_limsup_test(w: WeightSpec,
                      horizon: int = DEFAULT_HORIZON) -> CriterionReport:
    """Certify limsup w(n+1)/w(n) < 1 from declared ratio metadata.

    Only a sufficient test: a certified ratio bound below one yields Holds;
    without one the verdict is Inconclusive (never Fails), with the empirical
    limsup estimate from the top half of the scan.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    scan = scan_indices(horizon - 1)
    log_ratio = (np.asarray(w.log_eval(scan + 1), dtype=float)
                 - np.asarray(w.log_eval(scan), dtype=float))
    params = {"w": w.id, "horizon": int(horizon)}
    notes: list = []
    if w.ratio_bound is not None:
        nfrom, r = w.ratio_bound
        if 0.0 < r < 1.0 and nfrom < horizon:
            window_lo = max(nfrom, horizon // 2)
            win = scan >= window_lo
            if not np.any(win):
                win = scan >= nfrom
            emp = float(np.max(np.exp(log_ratio[win])))
            notes.append(f"certified: w(n+1)/w(n) <= {r} for all n >= {nfrom}")
            notes.append("empirical limsup estimate taken over the top of "
                         "the scan window")
            if emp > r * _BOUND_SLACK:
                notes.append("scan contradicts the declared ratio bound; "
                             "refusing to certify")
                verdict = Verdict.inconclusive(emp, horizon, notes)
            else:
                verdict = Verdict.holds(r, emp, horizon, notes)
        else:
            emp = float(np.max(np.exp(log_ratio[scan >= horizon // 2])))
            notes.append("declared ratio bound unusable at this horizon")
            verdict = Verdict.inconclusive(emp, horizon, notes)
    else:
        win = scan >= horizon // 2
        emp = float(np.max(np.exp(log_ratio[win]))) if np.any(win) else float(
            np.max(np.exp(log_ratio)))
        notes.append("no certified ratio bound; the test is only sufficient, "
                     "so no Fails verdict is possible")
        verdict = Verdict.inconclusive(emp, horizon, notes)
    samples = _thin_samples(scan, log_ratio)
    return CriterionReport("ratio_limsup", params, verdict, samples,
                           int(horizon))


def monotone_majorant_test(w: WeightSpec, k: int,
                           horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Probe whether n^k * w(n) is eventually non-increasing.

    Holds is finite-horizon evidence (a start index in the first half with no
    later increase); Fails means increases persist into the second half of
    the scan.  The reported quantity is the relative size of violations.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if horizon < 4:
        raise ValueError("horizon must be >= 4")
    last_violation = 0
    max_excess = 0.0
    lo = 1
    while lo < horizon:
        hi = min(horizon, lo + _CHUNK)
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        f = k * np.log(ns.astype(float)) + np.asarray(w.log_eval(ns),
                                                      dtype=float)
        d = np.diff(f)
        bad = d > _MONOTONE_EPS
        if np.any(bad):
            pos = np.nonzero(bad)[0]
            last_violation = int(ns[pos[-1]])
            max_excess = max(max_excess,
                             float(np.expm1(np.max(d[bad]))))
        lo = hi
    start = last_violation + 1
    if last_violation == 0:
        return Verdict.holds(
            0.0, 0.0, horizon,
            (f"n^{k} * w(n) is non-increasing from index 1 through the "
             f"horizon (finite-horizon evidence, not a certificate)",))
    if start <= horizon // 2:
        return Verdict.holds(
            0.0, 0.0, horizon,
            (f"n^{k} * w(n) is non-increasing from index {start} through "
             f"the horizon (finite-horizon evidence, not a certificate)",))
    wit = Witness(last_violation, max_excess, "monotonicity-violation",
                  f"n^{k} * w(n) still increases at index {last_violation}, "
                  f"inside the top half of the scan")
    return Verdict.fails(wit, max_excess, horizon,
                         ("increases persist at arbitrarily late scanned "
                          "indices",))


# ---------------------------------------------------------------------------
# tail-mass averaging quantity


def uw_quantity(w: WeightSpec,
                horizon: int = DEFAULT_HORIZON) -> CriterionReport:
    """Certify sup over m of (1/(m w(m+1))) * sum_{n>m} w(n).

    A finite certified value bounds the normalized tail mass of the weight
    and feeds the averaging/ergodic layer.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")

    def den(ms: np.ndarray) -> np.ndarray:
        return (np.log(ms.astype(float))
                + np.asarray(w.log_eval(ms + 1), dtype=float))

    profile = SupProfile(
        name="tail_mass_ratio",
        inner=w,
        beta=1.0,
        start_offset=1,
        log_denominator=den,
        envelope=w.uw_env(1),
        lower=w.uw_lower,
        diverges=w.diverges_beta(1.0),
        diverges_note="the weight itself is not summable",
    )
    return evaluate_sup_profile(profile, horizon,
                                {"w": w.id, "horizon": int(horizon)})


# ---------------------------------------------------------------------------
# exponent-set memberships and their boundary brackets


def rw_membership(w: WeightSpec, t: float,
                  horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Decide whether sum over n of n^t * w(n) is finite.

    Holds closes the series with a certified tail bound (or, for t < -1,
    with the certified sup of the weight); Fails uses the certified
    divergence metadata (minorants and family rules).
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    beta = t + 1.0
    log_term = _inner_log_term(w, beta)
    partial_log = float(suffix_log_sums(log_term, horizon,
                                        np.array([1], dtype=np.int64))[0])
    emp = _exp_clamped_scalar(partial_log)
    notes: list = []

    if w.diverges_beta(beta) is True:
        wit = Witness(1, emp, "diverging-inner-series",
                      "series certified divergent; the value shown is the "
                      "partial sum at the scan horizon")
        return Verdict.fails(wit, emp, horizon,
                             ("certified divergence from weight metadata",))

    tail_log = w.log_tail(horizon + 1, beta)
    if tail_log is not None and tail_log < float("inf"):
        total_log = float(np.logaddexp(partial_log, tail_log))
        notes.append("series closed: partial sum plus certified tail bound")
        return Verdict.holds(_exp_clamped_scalar(total_log), emp, horizon,
                             notes)
    if t < -1.0 and w.log_sup_bound is not None:
        delta = -1.0 - t
        total_log = w.log_sup_bound + _log_pseries_tail(1, delta)
        notes.append("series closed: certified weight sup times a certified "
                     "power-series tail")
        bound = _exp_clamped_scalar(total_log)
        if emp > bound * _BOUND_SLACK:
            notes.append("partial sum contradicts the closure; refusing to "
                         "certify")
            return Verdict.inconclusive(emp, horizon, notes)
        return Verdict.holds(bound, emp, horizon, notes)

    # heuristic growth route
    mid_targets = np.array([1, horizon // 2 + 1], dtype=np.int64)
    logs = suffix_log_sums(log_term, horizon, mid_targets)
    first_lt = float(np.asarray(log_term(np.array([1], dtype=np.int64)))[0])
    ratio = float(logs[0]) - first_lt if first_lt > NEG_INF else 0.0
    share_ok = float(logs[1]) >= math.log(TOP_SHARE_MIN) + float(logs[0])
    if ratio >= _LOG_DIVERGENCE and share_ok:
        wit = Witness(1, emp, "partial-sum-growth",
                      f"partial sum exceeds {DIVERGENCE_FACTOR:.0e} times "
                      f"the first term and keeps growing; heuristic evidence")
        return Verdict.fails(wit, emp, horizon,
                             ("heuristic growth threshold",))
    notes.append("no certificate in either direction at this horizon")
    return Verdict.inconclusive(emp, horizon, notes)


def sw1_membership(w: WeightSpec, s: float,
                   horizon: int = DEFAULT_HORIZON) -> Verdict:
    """Decide whether sup over n of 1/(n^s * w(n)) is finite.

    Holds comes from a certified minorant constant c(s) with
    w(n) >= c(s) n^-s (bound 1/c(s)); Fails from a certified diverging lower
    envelope or, for certified rapidly decreasing weights, from the decay
    class itself.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    scan = scan_indices(horizon)
    log_g = (-s * np.log(scan.astype(float))
             - np.asarray(w.log_eval(scan), dtype=float))
    emp = float(np.max(_exp_clamped(log_g)))
    notes: list = []

    log_c = w.minorant_log_c(s)
    if log_c is not None:
        bound = _exp_clamped_scalar(-log_c)
        notes.append("certified minorant: w(n) >= c * n^-s with "
                     f"1/c = {bound:.6g}")
        if emp > bound * _BOUND_SLACK:
            notes.append("scan contradicts the declared minorant; refusing "
                         "to certify")
            return Verdict.inconclusive(emp, horizon, notes)
        return Verdict.holds(bound, emp, horizon, notes)

    low = w.sw_lower(s)
    if low is not None and low.diverging:
        wit = _witness_from_lower(low, "analytic-lower-bound")
        return Verdict.fails(wit, emp, horizon,
                             ("certified diverging lower envelope for "
                              "1/(n^s w(n))",))

    if w.rapidly_decreasing:
        threshold = max(math.log(WITNESS_TARGET),
                        float(log_g[0]) + _LOG_DIVERGENCE)
        over = np.nonzero(log_g >= threshold)[0]
        if over.size:
            i0 = int(over[0])
            wit = Witness(int(scan[i0]),
                          _exp_clamped_scalar(float(log_g[i0])),
                          "sup-exceeds",
                          "weight is certified rapidly decreasing, so "
                          "1/(n^s w(n)) grows without bound for every s")
            return Verdict.fails(wit, emp, horizon,
                                 ("certified rapid decay forces divergence",))

    late = scan >= 100
    threshold = float(log_g[0]) + _LOG_DIVERGENCE
    over = np.nonzero(late & (log_g >= threshold))[0]
    if over.size:
        i0 = int(over[0])
        wit = Witness(int(scan[i0]), _exp_clamped_scalar(float(log_g[i0])),
                      "sup-exceeds",
                      f"scanned value exceeds {DIVERGENCE_FACTOR:.0e} times "
                      f"the value at index 1; heuristic evidence")
        return Verdict.fails(wit, emp, horizon,
                             ("heuristic growth threshold",))
    notes.append("no certificate in either direction at this horizon")
    return Verdict.inconclusive(emp, horizon, notes)


_T_LADDER = (-64.0, -16.0, -4.0, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5,
             2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
_S_LADDER = (-8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0,
             8.0, 16.0, 32.0, 64.0)


def _bisect_boundary(member: Callable[[float], Verdict], ladder, member_side,
                     tol: float) -> tuple[Optional[float], Optional[float],
                                          dict, list]:
    """Shared ladder walk + bisection for one-sided exponent sets.

    Returns (inside, outside, verdict_cache, notes); inside is the certified
    member endpoint, outside the certified non-member endpoint, either may be
    None when the ladder never found one.
    """
    cache: dict = {}

    def probe(x: float) -> Verdict:
        if x not in cache:
            cache[x] = member(x)
        return cache[x]

    notes: list = []
    inside = None
    outside = None
    for x in ladder:
        v = probe(x)
        if v.is_holds:
            inside = x if inside is None else (
                max(inside, x) if member_side == "lo" else min(inside, x))
        elif v.is_fails:
            outside = x if outside is None else (
                min(outside, x) if member_side == "lo" else max(outside, x))
    if inside is None or outside is None:
        return inside, outside, cache, notes
    lo, hi = ((inside, outside) if member_side == "lo"
              else (outside, inside))
    if lo >= hi:
        notes.append("membership verdicts are inconsistent across the "
                     "ladder; metadata conflict")
        return None, None, cache, notes
    iters = 0
    while hi - lo > tol and iters < 200:
        iters += 1
        mid = 0.5 * (lo + hi)
        v = probe(mid)
        if v.is_inconclusive:
            moved = False
            for frac in (0.375, 0.625):
                alt = lo + frac * (hi - lo)
                va = probe(alt)
                if not va.is_inconclusive:
                    mid, v, moved = alt, va, True
                    break
            if not moved:
                notes.append("membership undecided inside the bracket; "
                             "stopped tightening early")
                break
        member_at_mid = v.is_holds
        if member_side == "lo":
            if member_at_mid:
                lo = mid
            else:
                hi = mid
        else:
            if member_at_mid:
                hi = mid
            else:
                lo = mid
    inside, outside = ((lo, hi) if member_side == "lo" else (hi, lo))
    return inside, outside, cache, notes


def t0_estimate(w: WeightSpec, *, tol: float = BISECTION_TOL,
                horizon: int = ESTIMATE_HORIZON,
                ceiling: float = PROBE_CEILING) -> Bracket:
    """Bracket the supremum of the exponents t with sum n^t w(n) finite.

    The set is downward closed, so the bracket's low endpoint is a certified
    member and the high endpoint a certified non-member.  Certified rapidly
    decreasing weights short-circuit to the infinite flag.
    """
    def member(t: float) -> Verdict:
        return rw_membership(w, t, horizon=horizon)

    if w.rapidly_decreasing:
        v = member(ceiling)
        if v.is_holds:
            return Bracket("infinite", notes=(
                "certified rapid decay: every exponent is summable",
                f"verified membership at the probe ceiling {ceiling}",))
    ladder = tuple(x for x in _T_LADDER if x <= ceiling)
    inside, outside, cache, notes = _bisect_boundary(member, ladder, "lo", tol)
    if inside is not None and outside is None:
        return Bracket("infinite", lo=inside, member_side="lo",
                       lo_verdict=cache.get(inside), notes=tuple(
                           notes + [f"membership holds at every probe up to "
                                    f"{ceiling}"]))
    if inside is None:
        return Bracket("inconclusive", notes=tuple(
            notes + ["no certified member found on the probe ladder"]))
    return Bracket("bracket", lo=inside, hi=outside, member_side="lo",
                   lo_verdict=cache.get(inside), hi_verdict=cache.get(outside),
                   tol=outside - inside, notes=tuple(notes))


def s1_estimate(w: WeightSpec, *, tol: float = BISECTION_TOL,
                horizon: int = ESTIMATE_HORIZON,
                ceiling: float = PROBE_CEILING) -> Bracket:
    """Bracket the infimum of the exponents s with sup 1/(n^s w(n)) finite.

    The set is upward closed, so the bracket's high endpoint is a certified
    member.  Certified rapidly decreasing weights make the set empty.
    """
    def member(s: float) -> Verdict:
        return sw1_membership(w, s, horizon=horizon)

    if w.rapidly_decreasing:
        v = member(ceiling)
        if v.is_fails:
            return Bracket("empty", notes=(
                "certified rapid decay: no polynomial minorant exists, the "
                "set is empty",))
        return Bracket("empty", notes=(
            "certified rapid decay: no polynomial minorant exists, the set "
            "is empty",
            "probe at the ceiling did not contradict the metadata",))
    ladder = tuple(x for x in _S_LADDER if x <= ceiling)
    inside, outside, cache, notes = _bisect_boundary(member, ladder, "hi", tol)
    if inside is None:
        return Bracket("inconclusive", notes=tuple(
            notes + ["no certified member found on the probe ladder"]))
    if outside is None:
        return Bracket("bracket", lo=None, hi=inside, member_side="hi",
                       hi_verdict=cache.get(inside), notes=tuple(
                           notes + ["no certified non-member found below; "
                                    "only the member endpoint is certified"]))
    return Bracket("bracket", lo=outside, hi=inside, member_side="hi",
                   lo_verdict=cache.get(outside), hi_verdict=cache.get(inside),
                   tol=inside - outside, notes=tuple(notes))


# ---------------------------------------------------------------------------
# comparison transfer


def _last_ratio_violation(v: WeightSpec, w: WeightSpec, horizon: int) -> int:
    """Last index n < horizon with v(n+1)/w(n+1) > v(n)/w(n), or 0."""
    last = 0
    lo = 1
    while lo < horizon:
        hi = min(horizon, lo + _CHUNK)
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        lr = (np.asarray(v.log_eval(ns), dtype=float)
              - np.asarray(w.log_eval(ns), dtype=float))
        d = np.diff(lr)
        bad = np.nonzero(d > _MONOTONE_EPS)[0]
        if bad.size:
            last = int(ns[bad[-1]])
        lo = hi
    return last


def _transfer_head_bound_log(v: WeightSpec, w: WeightSpec, n0: int,
                             w_cert_log: float, horizon: int) -> Optional[float]:
    """Certified log bound on the quantity for indices below n0.

    Uses the exact head of the v-series plus the w-series closed at n0 scaled
    by the ratio at n0; requires a certified w tail.
    """
    if n0 <= 1:
        return w_cert_log
    w_tail = w.log_tail(horizon + 1, 0.0)
    if w_tail is None or w_tail == float("inf"):
        return None
    w_term = _inner_log_term(w, 0.0)
    w_suffix = float(suffix_log_sums(w_term, horizon,
                                     np.array([n0], dtype=np.int64))[0])
    w_closed = float(np.logaddexp(w_suffix, w_tail))
    ratio_n0 = float(v.log_eval(n0)) - float(w.log_eval(n0))
    v_term = _inner_log_term(v, 0.0)
    heads = np.arange(1, n0, dtype=np.int64)
    head_sums = suffix_log_sums(v_term, n0 - 1, heads)
    vals = (np.logaddexp(head_sums, ratio_n0 + w_closed)
            - np.asarray(v.log_eval(heads), dtype=float))
    vals = np.where(np.isnan(vals), NEG_INF, vals)
    return max(w_cert_log, float(np.max(vals)))


def comparison_transfer(v: WeightSpec, w: WeightSpec,
                        horizon: int = DEFAULT_HORIZON) -> ComparisonOutcome:
    """Transfer continuity/compactness verdicts along a monotone ratio.

    When v/w is non-increasing from some index in the first half of the scan,
    certified Holds verdicts for w carry over to v, and certified Fails
    verdicts for v carry over to w (contrapositive).  The monotonicity itself
    is finite-horizon evidence, and every transferred verdict says so.
    """
    if horizon < 4:
        raise ValueError("horizon must be >= 4")
    last_bad = _last_ratio_violation(v, w, horizon)
    n0 = last_bad + 1 if last_bad + 1 <= horizon // 2 else None
    notes: list = []
    transfers: list = []

    w_cont = continuity_criterion(w, horizon=horizon)
    w_comp = compactness_criterion(w, horizon=horizon)
    v_cont = continuity_criterion(v, horizon=horizon)
    v_comp = compactness_criterion(v, horizon=horizon)

    evidence_note = ("ratio monotonicity is finite-horizon evidence, not a "
                     "certificate")
    if n0 is None:
        notes.append("no index in the first half of the scan from which "
                     "v/w is non-increasing")
        headline = Verdict.inconclusive(v_cont.verdict.empirical_sup, horizon,
                                        tuple(notes))
        return ComparisonOutcome(headline, None, (), tuple(notes))

    notes.append(f"v/w non-increasing from index {n0} through the horizon")
    notes.append(evidence_note)

    if w_cont.verdict.is_holds:
        transfers.append(TransferRecord(
            "continuity", w.id, v.id, "Holds",
            "bounded quantity transfers down the monotone ratio"))
    if w_comp.verdict.is_holds:
        transfers.append(TransferRecord(
            "compactness", w.id, v.id, "Holds",
            "vanishing quantity transfers down the monotone ratio"))
    if v_cont.verdict.is_fails:
        transfers.append(TransferRecord(
            "continuity", v.id, w.id, "Fails",
            "unbounded quantity transfers up the monotone ratio "
            "(contrapositive)"))
    if v_comp.verdict.is_fails:
        transfers.append(TransferRecord(
            "compactness", v.id, w.id, "Fails",
            "non-vanishing quantity transfers up the monotone ratio "
            "(contrapositive)"))

    if w_cont.verdict.is_holds:
        w_cert_log = math.log(w_cont.verdict.certified_bound)
        head_log = _transfer_head_bound_log(v, w, n0, w_cert_log, horizon)
        if head_log is None:
            notes.append("cannot certify the indices below the monotone "
                         "start without a tail bound for w")
            headline = Verdict.inconclusive(v_cont.verdict.empirical_sup,
                                            horizon, tuple(notes))
        else:
            bound = _exp_clamped_scalar(head_log)
            emp = v_cont.verdict.empirical_sup
            if emp > bound * _BOUND_SLACK:
                notes.append("empirical scan of v contradicts the "
                             "transferred bound; refusing to certify")
                headline = Verdict.inconclusive(emp, horizon, tuple(notes))
            else:
                notes.append("continuity transferred onto v with a "
                             "certified bound")
                headline = Verdict.holds(max(bound, emp), emp, horizon,
                                         tuple(notes))
    else:
        notes.append("w carries no certified Holds to transfer")
        headline = Verdict.inconclusive(v_cont.verdict.empirical_sup, horizon,
                                        tuple(notes))
    return ComparisonOutcome(headline, n0, tuple(transfers), tuple(notes))
