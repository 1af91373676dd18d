"""Iterate and averaging dynamics of the operator on weighted sequences.

Everything operates on the first N coordinates, which triangularity makes
exact: coordinate n of any iterate depends only on coordinates 1..n of the
start vector.  Norm truncation is the one honest gap, and it is closed with
a certified weight-tail bound whenever the weight carries one.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .weights import WeightSpec
from .criteria import Bracket, CriterionReport, s1_estimate, uw_quantity
from .sections import apply_power

__all__ = [
    "ErgodicError",
    "BudgetError",
    "IterateTrace",
    "ProbeTrace",
    "PowerBoundednessReport",
    "DEFAULT_WORK_BUDGET",
    "work_budget",
    "kernel_bound_am",
    "weight_l1_bound",
    "iterate_trace",
    "cesaro_averages_trace",
    "power_bounded_probe",
    "range_identity_check",
    "ergodic_identity_check",
    "decomposition_project",
    "trace_to_csv",
]

DEFAULT_WORK_BUDGET = 2_000_000_000
#: burn-in before residual monotonicity is asserted by tests
MONOTONE_BURN_IN = 10


class ErgodicError(ValueError):
    """Bad arguments or a computation beyond the configured work budget."""


class BudgetError(ErgodicError):
    """The requested work exceeds the configured budget."""


def work_budget() -> int:
    """Work ceiling (coordinate updates) honored by trace operations.

    Overridable through the CESARO_BUDGET environment variable.
    """
    raw = os.environ.get("CESARO_BUDGET", "")
    if raw:
        try:
            return max(1, int(float(raw)))
        except ValueError as exc:
            raise ErgodicError(f"CESARO_BUDGET is not a number: {raw!r}") \
                from exc
    return DEFAULT_WORK_BUDGET


def _check_budget(work: int) -> None:
    budget = work_budget()
    if work > budget:
        raise BudgetError(
            f"requested work {work} exceeds the budget {budget}; lower M or "
            f"N, or raise CESARO_BUDGET")


def kernel_bound_am(m: int) -> float:
    """The decreasing kernel majorant ((m-1)/e)^(m-1) / (m-1)!.

    Dominates every coordinate of the m-th iterate of any basis vector e_r
    with r >= 2, after scaling by 1/(r-1).
    """
    if m < 1:
        raise ErgodicError("power must be >= 1")
    if m == 1:
        return 1.0
    k = m - 1
    return math.exp(k * (math.log(k) - 1.0) - math.lgamma(m))


def weight_l1_bound(w: WeightSpec, head: int = 4096) -> Optional[float]:
    """Certified upper bound on the full weight sum, if the tail closes."""
    tail = w.log_tail(head + 1, 1.0)
    if tail is None or tail == float("inf"):
        return None
    ns = np.arange(1, head + 1, dtype=np.int64)
    partial = float(np.sum(np.exp(np.asarray(w.log_eval(ns), dtype=float))))
    return partial + math.exp(min(tail, 700.0))


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class IterateTrace:
    """Norm and residual history of a vector driven by repeated averaging.

    ``limit_scalar`` encodes the limit candidate: c means the constant
    vector with every coordinate c (c = 0 is the zero vector), None means
    no candidate was asserted and residuals are absent.
    """

    probe_id: str
    records: tuple  # ((m, norm, residual-or-None), ...)
    limit_scalar: Optional[float]
    N: int
    tail_residual_bound: Optional[float]
    notes: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "probe_id": self.probe_id,
            "records": [
                {"m": m, "norm": norm, "residual": residual}
                for m, norm, residual in self.records
            ],
            "limit_scalar": self.limit_scalar,
            "N": self.N,
            "tail_residual_bound": self.tail_residual_bound,
            "notes": list(self.notes),
        }


def trace_to_csv(trace: IterateTrace) -> str:
    lines = ["m,norm,residual"]
    for m, norm, residual in trace.records:
        res = "" if residual is None else repr(residual)
        lines.append(f"{m},{norm!r},{res}")
    return "\n".join(lines) + "\n"


def _weight_values(w: WeightSpec, N: int) -> np.ndarray:
    ns = np.arange(1, N + 1, dtype=np.int64)
    return np.exp(np.asarray(w.log_eval(ns), dtype=float))


def _pick_candidate(w: WeightSpec, x: Sequence) -> Optional[float]:
    """Limit candidate: x1 times the constant-one vector needs a summable
    weight; probes starting at zero in the first coordinate decay to zero.
    """
    x1 = float(x[0]) if len(x) else 0.0
    if x1 == 0.0:
        return 0.0
    if w.is_summable:
        return x1
    return None


def _tail_closure(w: WeightSpec, N: int, sup_bound: float) -> Optional[float]:
    tail = w.log_tail(N + 1, 1.0)
    if tail is None or tail == float("inf"):
        return None
    return sup_bound * math.exp(min(tail, 700.0))


def iterate_trace(w: WeightSpec, x: Sequence, M: int, N: int,
                  probe_id: str = "custom",
                  limit_scalar: Optional[float] = None,
                  auto_limit: bool = True, mode: str = "float") -> IterateTrace:
    """Record weighted norms and residuals of the first M iterates.

    The limit candidate defaults to x1 times the constant-one vector when
    the weight is summable (and to zero when the probe starts at zero);
    pass ``limit_scalar`` to override, or ``auto_limit=False`` for none.
    Residuals are closed with the certified weight tail beyond N, so a
    small recorded residual is a certified bound, not a truncation hope.
    Rational mode keeps the iterate coordinates exact; norms are float
    sums of the exact coordinates either way.
    """
    if M < 1 or N < 1:
        raise ErgodicError("M and N must be >= 1")
    _check_budget(M * N)
    if limit_scalar is None and auto_limit:
        limit_scalar = _pick_candidate(w, x)
    arr = _start_vector(x, N, mode)
    sup_abs = float(np.max(np.abs(_as_float(arr)))) if N else 0.0
    wvals = _weight_values(w, N)
    ns = np.arange(1, N + 1, dtype=float)
    tail_term = None
    notes = []
    if limit_scalar is not None:
        tail_term = _tail_closure(w, N, sup_abs + abs(limit_scalar))
        if tail_term is None:
            notes.append("no certified weight tail; residuals cover only "
                         "the first N coordinates")
    records = []
    for m in range(1, M + 1):
        arr = _advance(arr, ns, mode)
        vals = _as_float(arr)
        norm = float(np.sum(wvals * np.abs(vals)))
        if limit_scalar is None:
            residual = None
        else:
            residual = float(np.sum(wvals * np.abs(vals - limit_scalar)))
            if tail_term is not None:
                residual += tail_term
        records.append((m, norm, residual))
    return IterateTrace(probe_id, tuple(records), limit_scalar, N,
                        tail_term, tuple(notes))


def _start_vector(x: Sequence, N: int, mode: str):
    if mode == "rational":
        vals = [Fraction(v) if not isinstance(v, Fraction) else v
                for v in x[:N]]
        return vals + [Fraction(0)] * (N - len(vals))
    if mode != "float":
        raise ErgodicError(f"unknown arithmetic mode {mode!r}")
    arr = np.zeros(N, dtype=float)
    arr[:min(len(x), N)] = [float(v) for v in x[:N]]
    return arr


def _advance(arr, ns: np.ndarray, mode: str):
    if mode == "rational":
        out = []
        acc = Fraction(0)
        for n, v in enumerate(arr, start=1):
            acc += v
            out.append(acc / n)
        return out
    return np.cumsum(arr) / ns


def _as_float(arr) -> np.ndarray:
    if isinstance(arr, np.ndarray):
        return arr
    return np.asarray([float(v) for v in arr], dtype=float)


def cesaro_averages_trace(w: WeightSpec, x: Sequence, n_max: int, N: int,
                          probe_id: str = "custom",
                          limit_scalar: Optional[float] = None,
                          auto_limit: bool = True,
                          mode: str = "float") -> IterateTrace:
    """Record norms and residuals of the running averages of the iterates.

    Single pass: the n-th record reuses the partial sum of the first n
    iterates, so the cost matches one iterate trace.
    """
    if n_max < 1 or N < 1:
        raise ErgodicError("n_max and N must be >= 1")
    _check_budget(n_max * N)
    if limit_scalar is None and auto_limit:
        limit_scalar = _pick_candidate(w, x)
    arr = _start_vector(x, N, mode)
    sup_abs = float(np.max(np.abs(_as_float(arr)))) if N else 0.0
    wvals = _weight_values(w, N)
    ns = np.arange(1, N + 1, dtype=float)
    tail_term = None
    notes = []
    if limit_scalar is not None:
        tail_term = _tail_closure(w, N, sup_abs + abs(limit_scalar))
        if tail_term is None:
            notes.append("no certified weight tail; residuals cover only "
                         "the first N coordinates")
    if mode == "rational":
        acc = [Fraction(0)] * N
    else:
        acc = np.zeros(N, dtype=float)
    records = []
    for n in range(1, n_max + 1):
        arr = _advance(arr, ns, mode)
        if mode == "rational":
            acc = [a + b for a, b in zip(acc, arr)]
            avg = np.asarray([float(v / n) for v in acc], dtype=float)
        else:
            acc += arr
            avg = acc / n
        norm = float(np.sum(wvals * np.abs(avg)))
        if limit_scalar is None:
            residual = None
        else:
            residual = float(np.sum(wvals * np.abs(avg - limit_scalar)))
            if tail_term is not None:
                residual += tail_term
        records.append((n, norm, residual))
    return IterateTrace(probe_id, tuple(records), limit_scalar, N,
                        tail_term, tuple(notes))


# ---------------------------------------------------------------------------
# power-boundedness probing


@dataclass(frozen=True)
class ProbeTrace:
    """Summary of one probe under repeated application."""

    probe_id: str
    sup_ratio: float
    growth_per_step: float
    first_norm: float
    final_norm: float

    def to_json_dict(self) -> dict:
        return {
            "probe_id": self.probe_id,
            "sup_ratio": self.sup_ratio,
            "growth_per_step": self.growth_per_step,
            "first_norm": self.first_norm,
            "final_norm": self.final_norm,
        }


@dataclass(frozen=True)
class PowerBoundednessReport:
    """Empirical probe traces next to the certified expectations.

    ``expectation`` is "bounded" when the averaged-tail criterion holds,
    "growth" when a certified boundary exponent below one forces powers to
    blow up, and "open" when neither certificate applies; open cases report
    data without a verdict.
    """

    probes: tuple
    uw_report: CriterionReport
    s1: Bracket
    expectation: str
    expected_growth_factor: Optional[float]
    M: int
    N: int
    notes: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "probes": [p.to_json_dict() for p in self.probes],
            "uw": self.uw_report.to_json_dict(),
            "s1": self.s1.to_json_dict(),
            "expectation": self.expectation,
            "expected_growth_factor": self.expected_growth_factor,
            "M": self.M,
            "N": self.N,
            "notes": list(self.notes),
        }


def _growth_fit(norms: Sequence[float]) -> float:
    """Per-step growth factor from a log-linear fit on the last half."""
    vals = np.maximum(np.asarray(norms, dtype=float), 1e-300)
    half = len(vals) // 2
    ys = np.log(vals[half:])
    if ys.size < 2:
        return 1.0
    xs = np.arange(ys.size, dtype=float)
    slope = float(np.polyfit(xs, ys, 1)[0])
    return math.exp(slope)


def default_probes(N: int, count_basis: int = 8, random_count: int = 2,
                   seed: int = 0, support: int = 16) -> list:
    """Basis vectors e_1..e_8 plus seeded random finitely supported probes."""
    probes = []
    for r in range(1, count_basis + 1):
        if r <= N:
            vec = np.zeros(min(N, max(r, support)), dtype=float)
            vec[r - 1] = 1.0
            probes.append((f"e{r}", vec))
    rng = np.random.default_rng(seed)
    for j in range(random_count):
        vec = rng.standard_normal(min(support, N))
        probes.append((f"random{j}:seed={seed}", vec))
    return probes


def power_bounded_probe(w: WeightSpec, M: int, N: int,
                        probes: Optional[Sequence] = None,
                        seed: int = 0) -> PowerBoundednessReport:
    """Drive probes through M iterations and compare with certificates.

    Probes are normalized in the weighted norm before iteration, so the
    recorded sups are the ratios against the start.  The expectation field
    cross-references the averaged-tail criterion (bounded) and the
    certified boundary exponent (growth at least 1/s per step); when
    neither certifies, the report stays deliberately verdict-free.
    """
    if M < 1 or N < 1:
        raise ErgodicError("M and N must be >= 1")
    probe_list = list(probes) if probes is not None \
        else default_probes(N, seed=seed)
    _check_budget(M * N * max(1, len(probe_list)))
    wvals = _weight_values(w, N)
    ns = np.arange(1, N + 1, dtype=float)
    traces = []
    for probe_id, vec in probe_list:
        arr = np.zeros(N, dtype=float)
        data = np.asarray([float(v) for v in vec[:N]], dtype=float)
        arr[:data.size] = data
        start = float(np.sum(wvals * np.abs(arr)))
        if start <= 0.0:
            raise ErgodicError(f"probe {probe_id!r} has zero weighted norm")
        arr /= start
        norms = []
        for _ in range(M):
            arr = np.cumsum(arr) / ns
            norms.append(float(np.sum(wvals * np.abs(arr))))
        traces.append(ProbeTrace(
            probe_id=probe_id,
            sup_ratio=float(max(norms)),
            growth_per_step=_growth_fit(norms),
            first_norm=norms[0],
            final_norm=norms[-1],
        ))
    uw = uw_quantity(w)
    s1 = s1_estimate(w)
    notes = []
    if uw.verdict.is_holds:
        expectation = "bounded"
        factor = None
    elif s1.kind == "bracket" and s1.point is not None and s1.point < 1.0:
        expectation = "growth"
        factor = 1.0 / s1.point
        notes.append("certified boundary exponent below one forces power "
                     "norms to grow at least like its reciprocal per step")
    else:
        expectation = "open"
        factor = None
        notes.append("no certificate either way; traces are reported "
                     "without a boundedness verdict")
    return PowerBoundednessReport(tuple(traces), uw, s1, expectation,
                                  factor, M, N, tuple(notes))


# ---------------------------------------------------------------------------
# exact operator identities


def range_identity_check(r: int, N: int) -> float:
    """Residual of the range identity that exhibits e_{r+1} as a difference.

    Applying (identity - averaging) to e_{r+1} minus the uniform spread of
    the first r basis vectors returns e_{r+1} exactly; computed in exact
    rationals, so the residual is genuinely zero, not merely small.
    """
    if r < 1:
        raise ErgodicError("index must be >= 1")
    if r + 1 > N:
        raise ErgodicError("need r + 1 <= N")
    y = [Fraction(0)] * N
    y[r] = Fraction(1)
    for k in range(r):
        y[k] -= Fraction(1, r)
    cy = apply_power(y, 1, N, "rational")
    worst = Fraction(0)
    for n in range(N):
        got = y[n] - cy[n]
        want = Fraction(1) if n == r else Fraction(0)
        worst = max(worst, abs(got - want))
    return float(worst)


def ergodic_identity_check(w: WeightSpec, x: Sequence, n: int, N: int,
                           mode: str = "float") -> tuple:
    """Residual pair for the two averaging identities.

    First: (I - T) applied to the n-th running average equals
    (T - T^{n+1}) / n.  Second: T^n / n equals the n-th running average
    minus (n-1)/n times the (n-1)-st.  Exact zero in rational mode.
    """
    if n < 1 or N < 1:
        raise ErgodicError("n and N must be >= 1")
    _check_budget((n + 1) * N)
    if mode == "rational":
        cur = tuple(Fraction(v) if not isinstance(v, Fraction) else v
                    for v in list(x[:N]) + [0] * max(0, N - len(x)))
        zero = Fraction(0)
    else:
        cur = tuple(float(v) for v in list(x[:N]) + [0.0] * max(0, N - len(x)))
        zero = 0.0
    powers = [cur]  # T^0 x
    for _ in range(n + 1):
        powers.append(apply_power(powers[-1], 1, N, mode))
    own = [zero] * N
    prev_avg = None
    for k in range(1, n + 1):
        own = [a + b for a, b in zip(own, powers[k])]
        if k == n - 1:
            prev_avg = [v / k for v in own]
    avg_n = [v / n for v in own]
    t_avg = apply_power(avg_n, 1, N, mode)
    lhs1 = [a - b for a, b in zip(avg_n, t_avg)]
    rhs1 = [(a - b) / n for a, b in zip(powers[1], powers[n + 1])]
    res1 = _residual_norm(w, [a - b for a, b in zip(lhs1, rhs1)])
    if n == 1:
        # the second identity degenerates to "the first average is T"
        diff2 = [a - b for a, b in zip(avg_n, powers[1])]
    else:
        lhs2 = [v / n for v in powers[n]]
        rhs2 = [a - Fraction(n - 1, n) * b if mode == "rational"
                else a - (n - 1) / n * b
                for a, b in zip(avg_n, prev_avg)]
        diff2 = [a - b for a, b in zip(lhs2, rhs2)]
    res2 = _residual_norm(w, diff2)
    return res1, res2


def _residual_norm(w: WeightSpec, diff: Sequence) -> float:
    wvals = _weight_values(w, len(diff))
    return float(np.sum(wvals * np.abs(np.asarray(
        [float(v) for v in diff], dtype=float))))


def decomposition_project(w: WeightSpec, x: Sequence, N: int) -> tuple:
    """Split a vector into its constant-direction part and the remainder.

    Returns (c, remainder) with c the first coordinate and remainder the
    vector minus c on every coordinate; the remainder's first coordinate is
    zero and the reconstruction is exact.  Requires a summable weight, so
    the constant vector actually lives in the space.
    """
    if N < 1:
        raise ErgodicError("N must be >= 1")
    if not w.is_summable:
        raise ErgodicError(
            "the constant vector is not in the space unless the weight is "
            "summable")
    coords = [float(v) for v in x[:N]] + [0.0] * max(0, N - len(x))
    c = coords[0]
    remainder = tuple(v - c for v in coords)
    return c, remainder
