"""Exact finite sections of the averaging operator and its derived operators.

Everything here is lower triangular, so the first N coordinates of any of
these operators applied to a vector depend only on the first N coordinates of
the vector.  Finite sections therefore carry no truncation error: the N-by-N
block *is* the operator on those coordinates.

Two arithmetic modes are supported throughout:

``rational``
    Exact arithmetic over rationals (complex rationals where needed).  Used
    for oracle checks at small dimensions.

``float``
    complex128 with log-magnitude/unit-phase product accumulation where naive
    products would overflow or underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .weights import NEG_INF, WeightSpec
from .criteria import suffix_log_sums

__all__ = [
    "QC",
    "SectionError",
    "FiniteSection",
    "WeightedVector",
    "DENSE_DIMENSION_CAP",
    "RATIONAL_DIMENSION_CAP",
    "SIGMA_PROXIMITY_EPS",
    "distance_to_limit_set",
    "identity_section",
    "cesaro_section",
    "apply_power",
    "kernel_power_entry",
    "operator_norm_l1w",
    "resolvent_section",
    "eigenvector",
    "dual_eigenvector",
    "dual_apply",
    "shifted_inverse_section",
    "weighted_norm",
]

#: dense storage above this dimension is refused; use the lazy section
DENSE_DIMENSION_CAP = 4096
#: exact rational sections above this dimension are refused (cost blows up)
RATIONAL_DIMENSION_CAP = 512
#: default rejection distance around the closed candidate-eigenvalue set
SIGMA_PROXIMITY_EPS = 1e-9


class SectionError(ValueError):
    """Bad dimension, mode, or an operator evaluated at an excluded point."""


# ---------------------------------------------------------------------------
# complex rationals


@dataclass(frozen=True)
class QC:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def from_number(cls, z) -> "QC":
        if isinstance(z, QC):
            return z
        if isinstance(z, complex):
            return cls(Fraction(z.real), Fraction(z.imag))
        if isinstance(z, Rational):
            return cls(Fraction(z), Fraction(0))
        if isinstance(z, float):
            return cls(Fraction(z), Fraction(0))
        raise TypeError(f"cannot build an exact complex from {type(z).__name__}")

    def __add__(self, other: "QC") -> "QC":
        return QC(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "QC") -> "QC":
        return QC(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "QC":
        return QC(-self.re, -self.im)

    def __mul__(self, other: "QC") -> "QC":
        return QC(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    def __truediv__(self, other: "QC") -> "QC":
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by exact complex zero")
        return QC((self.re * other.re + self.im * other.im) / d,
                  (self.im * other.re - self.re * other.im) / d)

    def conjugate(self) -> "QC":
        return QC(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        if self.im == 0:
            return f"QC({self.re})"
        return f"QC({self.re}, {self.im})"


_QC_ONE = QC(Fraction(1))


def _log_abs(x) -> float:
    """log |x| for ints, Fractions, floats, complex, QC; -inf at zero.

    Big integers and huge Fractions are handled without intermediate float
    conversion, so nothing overflows.
    """
    if isinstance(x, QC):
        a2 = x.abs2()
        if a2 == 0:
            return NEG_INF
        return 0.5 * (math.log(a2.numerator) - math.log(a2.denominator))
    if isinstance(x, Fraction):
        if x == 0:
            return NEG_INF
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    if isinstance(x, int):
        return math.log(abs(x)) if x else NEG_INF
    if isinstance(x, complex):
        m = abs(x)
        return math.log(m) if m else NEG_INF
    m = abs(float(x))
    return math.log(m) if m else NEG_INF


# ---------------------------------------------------------------------------
# sections and weighted vectors


@dataclass(frozen=True)
class FiniteSection:
    """An N-by-N lower-triangular operator block.

    ``rows[n-1]`` holds the n entries of row n (columns 1..n).  Float-mode
    rows are numpy complex arrays; rational-mode rows are tuples of Fractions
    or exact complex rationals.  ``rows`` is None for the lazy averaging
    section above the dense cap, whose entries are generated on demand.
    """

    N: int
    tag: str
    mode: str
    rows: Optional[tuple] = None

    @property
    def is_lazy(self) -> bool:
        return self.rows is None

    def entry(self, n: int, m: int):
        """1-based entry accessor; zero above the diagonal."""
        if not (1 <= n <= self.N and 1 <= m <= self.N):
            raise IndexError("section index out of range")
        if m > n:
            return 0
        if self.rows is not None:
            return self.rows[n - 1][m - 1]
        if self.tag == "C":
            return Fraction(1, n) if self.mode == "rational" else 1.0 / n
        raise SectionError(f"lazy section with tag {self.tag!r} has no "
                           f"stored entries")

    def leading_block(self, k: int) -> "FiniteSection":
        """The k-by-k leading block (exact, by triangularity)."""
        if not (1 <= k <= self.N):
            raise SectionError("leading block dimension out of range")
        if self.rows is None:
            return FiniteSection(k, self.tag, self.mode, None)
        rows = tuple(self.rows[i][:i + 1] if isinstance(self.rows[i], np.ndarray)
                     else tuple(self.rows[i][:i + 1]) for i in range(k))
        return FiniteSection(k, self.tag, self.mode, rows)

    def to_text(self) -> str:
        """Plain-text export: one `n m re im` line per stored entry."""
        if self.rows is None:
            raise SectionError("lazy sections are not exported; build a "
                               "dense block first")
        lines = [f"% section tag={self.tag} N={self.N} mode={self.mode}"]
        for n in range(1, self.N + 1):
            row = self.rows[n - 1]
            for m in range(1, n + 1):
                z = row[m - 1]
                if isinstance(z, QC):
                    re, im = float(z.re), float(z.im)
                elif isinstance(z, complex):
                    re, im = z.real, z.imag
                else:
                    re, im = float(z), 0.0
                lines.append(f"{n} {m} {re!r} {im!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class WeightedVector:
    """Coordinates paired with the weight that prices them."""

    coords: tuple
    weight: WeightSpec

    @property
    def norm(self) -> float:
        return weighted_norm(self.coords, self.weight)

    def to_text(self) -> str:
        lines = [f"% vector len={len(self.coords)} weight={self.weight.id}"]
        for i, x in enumerate(self.coords, 1):
            lines.append(f"{i} {x!r}")
        return "\n".join(lines) + "\n"


def weighted_norm(coords: Sequence, w: WeightSpec) -> float:
    """Sum of w(n) |x_n|, accumulated through the log domain per term.

    Each term is exp(log w(n) + log |x_n|), so weights far below float range
    cannot poison the sum, and huge exact coordinates do not overflow.
    """
    terms = []
    for i, x in enumerate(coords, 1):
        la = _log_abs(x)
        if la == NEG_INF:
            continue
        lw = float(w.log_eval(i))
        terms.append(math.exp(min(lw + la, 700.0)))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# the averaging section and its powers


def _check_mode(mode: str) -> None:
    if mode not in ("rational", "float"):
        raise SectionError(f"unknown arithmetic mode {mode!r}")


def _check_rational_dim(N: int, mode: str) -> None:
    if mode == "rational" and N > RATIONAL_DIMENSION_CAP:
        raise SectionError(
            f"rational mode is capped at N = {RATIONAL_DIMENSION_CAP}; "
            f"use float mode for larger sections")


def identity_section(N: int, mode: str = "rational") -> FiniteSection:
    """The N-by-N identity (handy as a norm baseline)."""
    _check_mode(mode)
    if N < 1:
        raise SectionError("dimension must be >= 1")
    _check_rational_dim(N, mode)
    if mode == "rational":
        rows = tuple(tuple(Fraction(1) if m == n else Fraction(0)
                           for m in range(n + 1)) for n in range(N))
    else:
        rows = tuple(np.array([0.0] * n + [1.0], dtype=float)
                     for n in range(N))
    return FiniteSection(N, "I", mode, rows)


def cesaro_section(N: int, mode: str = "rational") -> FiniteSection:
    """The N-by-N averaging section: row n is n copies of 1/n.

    Above the dense cap a lazy section is returned; its entries are generated
    on demand and the norm routine works column-by-column without storage.
    """
    _check_mode(mode)
    if N < 1:
        raise SectionError("dimension must be >= 1")
    if N > DENSE_DIMENSION_CAP:
        return FiniteSection(N, "C", mode, None)
    _check_rational_dim(N, mode)
    if mode == "rational":
        rows = tuple(tuple(Fraction(1, n + 1) for _ in range(n + 1))
                     for n in range(N))
    else:
        rows = tuple(np.full(n + 1, 1.0 / (n + 1)) for n in range(N))
    return FiniteSection(N, "C", mode, rows)


def _to_exact(x):
    if isinstance(x, (QC, Fraction)):
        return x
    if isinstance(x, complex):
        if x.imag == 0.0:
            return Fraction(x.real)
        return QC.from_number(x)
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} in rational mode")


def apply_power(x: Sequence, m: int, N: int,
                mode: str = "float") -> tuple:
    """First N coordinates of the m-th power of the averaging operator at x.

    Exact in rational mode; float mode runs vectorized cumulative means.
    Triangularity makes the result independent of coordinates beyond N.
    """
    _check_mode(mode)
    if m < 1:
        raise SectionError("power must be >= 1")
    if N < 1:
        raise SectionError("dimension must be >= 1")
    if len(x) < N:
        raise SectionError("need at least N input coordinates")
    if mode == "rational":
        cur = [_to_exact(v) for v in x[:N]]
        for _ in range(m):
            out = []
            acc = None
            for n, v in enumerate(cur, 1):
                acc = v if acc is None else acc + v
                if isinstance(acc, QC):
                    out.append(acc / QC(Fraction(n)))
                else:
                    out.append(acc / n)
            cur = out
        return tuple(cur)
    arr = np.asarray([complex(v) for v in x[:N]], dtype=complex)
    ns = np.arange(1, N + 1, dtype=float)
    for _ in range(m):
        arr = np.cumsum(arr) / ns
    if np.all(arr.imag == 0.0):
        return tuple(float(v) for v in arr.real)
    return tuple(complex(v) for v in arr)


def kernel_power_entry(n: int, k: int, m: int) -> Fraction:
    """Exact (n, k) entry of the m-th power of the averaging operator.

    Closed form: binom(n-1, k-1) * sum_{j=0}^{n-k} (-1)^j binom(n-k, j) /
    (k+j)^m, summed over exact rationals.
    """
    if k < 1 or n < 1 or m < 1:
        raise SectionError("indices and power must be >= 1")
    if k > n:
        raise SectionError("column index exceeds row index")
    total = Fraction(0)
    for j in range(n - k + 1):
        term = Fraction(math.comb(n - k, j), (k + j) ** m)
        total += term if j % 2 == 0 else -term
    return math.comb(n - 1, k - 1) * total


# ---------------------------------------------------------------------------
# weighted operator norms of sections


def operator_norm_l1w(section: FiniteSection, w: WeightSpec,
                      closure: bool = False) -> float:
    """Largest weighted column sum: max over m of sum_n w(n)|a_nm| / w(m).

    This is the exact norm of the truncated operator on the weighted
    summable space, hence a lower bound for the full operator norm.  With
    ``closure=True`` on an averaging-tagged section, each column is closed
    with the weight's certified tail bound, turning every column value into
    a certified upper bound for that column of the full operator.
    """
    N = section.N
    if section.is_lazy or (section.tag == "C" and closure):
        if section.tag != "C":
            raise SectionError("matrix-free norms exist only for the "
                               "averaging tag")
        targets = np.arange(1, N + 1, dtype=np.int64)

        def log_term(ns: np.ndarray) -> np.ndarray:
            return (np.asarray(w.log_eval(ns), dtype=float)
                    - np.log(ns.astype(float)))

        suffix = suffix_log_sums(log_term, N, targets)
        if closure:
            tail = w.log_tail(N + 1, 0.0)
            if tail is not None and tail < float("inf"):
                suffix = np.logaddexp(suffix, tail)
        col_logs = suffix - np.asarray(w.log_eval(targets), dtype=float)
        col_logs = np.where(np.isnan(col_logs), NEG_INF, col_logs)
        return float(np.exp(np.min([np.max(col_logs), 700.0])))
    wlog = np.asarray(w.log_eval(np.arange(1, N + 1, dtype=np.int64)),
                      dtype=float)
    wvals = np.exp(wlog)
    col = np.zeros(N, dtype=float)
    for n in range(1, N + 1):
        row = section.rows[n - 1]
        if isinstance(row, np.ndarray):
            col[:n] += wvals[n - 1] * np.abs(row)
        else:
            for m in range(1, n + 1):
                la = _log_abs(row[m - 1])
                if la != NEG_INF:
                    col[m - 1] += wvals[n - 1] * math.exp(min(la, 700.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = col / wvals
    ratios = np.where(np.isnan(ratios), 0.0, ratios)
    best = float(np.max(ratios))
    return best


# ---------------------------------------------------------------------------
# the resolvent section


def distance_to_limit_set(lam: complex) -> float:
    """Distance from lam to {0} union {1/m : m a positive integer}."""
    z = complex(lam)
    best = abs(z)
    re = z.real
    candidates = {1, 2}
    if re > 1e-18:
        t = 1.0 / re
        if t < 1e18:
            base = int(t)
            candidates.update({max(1, base - 1), max(1, base),
                               base + 1, base + 2})
    for m in candidates:
        best = min(best, abs(z - 1.0 / m))
    return best


def _nearest_excluded_point(lam: complex) -> str:
    z = complex(lam)
    best_val = abs(z)
    best_desc = "0"
    re = z.real
    candidates = {1, 2}
    if re > 1e-18:
        t = 1.0 / re
        if t < 1e18:
            base = int(t)
            candidates.update({max(1, base - 1), max(1, base),
                               base + 1, base + 2})
    for m in sorted(candidates):
        d = abs(z - 1.0 / m)
        if d < best_val:
            best_val = d
            best_desc = f"1/{m}"
    return best_desc


def resolvent_section(lam, N: int, mode: str = "float",
                      eps: float = SIGMA_PROXIMITY_EPS) -> FiniteSection:
    """Exact N-by-N section of the inverse of (averaging operator - lam I).

    The diagonal is 1/(1/n - lam); strictly below it the entries are
    -(1/lam^2) / (n * prod_{k=m}^{n} (1 - 1/(lam k))).  Row products are
    accumulated as log-magnitude plus unit phase in float mode, so deep rows
    neither overflow nor underflow.  Values of lam within ``eps`` of the
    excluded set {0} union {1/m} are rejected.
    """
    _check_mode(mode)
    if N < 1:
        raise SectionError("dimension must be >= 1")
    if N > DENSE_DIMENSION_CAP:
        raise SectionError(f"dense resolvent sections are capped at "
                           f"N = {DENSE_DIMENSION_CAP}")
    lam_c = lam.to_complex() if isinstance(lam, QC) else complex(lam)
    if distance_to_limit_set(lam_c) <= eps:
        raise SectionError(
            f"lam = {lam_c} is within {eps} of the excluded point "
            f"{_nearest_excluded_point(lam_c)}")
    if mode == "rational":
        _check_rational_dim(N, mode)
        lq = QC.from_number(lam if isinstance(lam, (QC, Fraction)) else lam_c)
        inv_lam2 = _QC_ONE / (lq * lq)
        rows = []
        factors = [_QC_ONE - _QC_ONE / (lq * QC(Fraction(k)))
                   for k in range(1, N + 1)]
        for n in range(1, N + 1):
            row = [QC(Fraction(0))] * n
            row[n - 1] = _QC_ONE / (QC(Fraction(1, n)) - lq)
            prod = factors[n - 1]
            for m in range(n - 1, 0, -1):
                prod = prod * factors[m - 1]
                row[m - 1] = -(inv_lam2 / (QC(Fraction(n)) * prod))
            rows.append(tuple(row))
        return FiniteSection(N, f"resolvent({lam_c})", "rational",
                             tuple(rows))
    ks = np.arange(1, N + 1, dtype=float)
    factors = 1.0 - 1.0 / (lam_c * ks)
    mags = np.abs(factors)
    log_cum = np.concatenate(([0.0], np.cumsum(np.log(mags))))
    phase_cum = np.concatenate(([1.0 + 0.0j],
                                np.cumprod(factors / mags)))
    inv_lam2 = 1.0 / (lam_c * lam_c)
    rows = []
    for n in range(1, N + 1):
        row = np.zeros(n, dtype=complex)
        row[n - 1] = 1.0 / (1.0 / n - lam_c)
        if n > 1:
            ms = np.arange(1, n, dtype=np.int64)
            log_mag = log_cum[ms - 1] - log_cum[n] - math.log(n)
            phases = phase_cum[ms - 1] / phase_cum[n]
            row[:n - 1] = -inv_lam2 * np.exp(log_mag) * phases
        rows.append(row)
    return FiniteSection(N, f"resolvent({lam_c})", "float", tuple(rows))


# ---------------------------------------------------------------------------
# eigenvectors, dual vectors, shifted inverses


def eigenvector(m: int, N: int, mode: str = "rational") -> tuple:
    """First N coordinates of the eigenvector with eigenvalue 1/m.

    Coordinate n is binom(n-1, m-1): row n of the averaging section maps it
    to exactly 1/m times itself.
    """
    if m < 1:
        raise SectionError("eigenvalue index must be >= 1")
    if N < 1:
        raise SectionError("dimension must be >= 1")
    _check_mode(mode)
    coords = [math.comb(n - 1, m - 1) for n in range(1, N + 1)]
    if mode == "rational":
        return tuple(Fraction(c) for c in coords)
    return tuple(float(c) for c in coords)


def dual_eigenvector(lam, N: int, mode: str = "rational") -> tuple:
    """First N coordinates of the dual eigenvector at lam (nonzero).

    Starts at 1 and multiplies by (1 - 1/(lam k)); for lam = 1/m the factor
    at k = m vanishes and the vector terminates after m coordinates.
    """
    if N < 1:
        raise SectionError("dimension must be >= 1")
    _check_mode(mode)
    if mode == "rational":
        lq = QC.from_number(lam)
        if lq.is_zero:
            raise SectionError("lam must be nonzero")
        out = [_QC_ONE]
        cur = _QC_ONE
        for k in range(1, N):
            cur = cur * (_QC_ONE - _QC_ONE / (lq * QC(Fraction(k))))
            out.append(cur)
        if all(q.is_real for q in out):
            return tuple(q.re for q in out)
        return tuple(out)
    lam_c = complex(lam)
    if lam_c == 0:
        raise SectionError("lam must be nonzero")
    out = [1.0 + 0.0j]
    cur = 1.0 + 0.0j
    for k in range(1, N):
        cur = cur * (1.0 - 1.0 / (lam_c * k))
        out.append(cur)
    if all(z.imag == 0.0 for z in out):
        return tuple(z.real for z in out)
    return tuple(out)


def dual_apply(y: Sequence) -> tuple:
    """Apply the dual operator to a finitely supported vector.

    Coordinate n of the image is sum_{k>=n} y_k / k; with finite support the
    sums are finite and exact for rational input.
    """
    n = len(y)
    exact = all(isinstance(v, (int, Fraction, QC)) for v in y)
    if exact:
        complex_in = any(isinstance(v, QC) for v in y)
        acc: Union[Fraction, QC] = QC(Fraction(0)) if complex_in else Fraction(0)
        res = [acc] * n
        for k in range(n, 0, -1):
            v = y[k - 1]
            if complex_in:
                term = (v if isinstance(v, QC) else QC(Fraction(v))) \
                    / QC(Fraction(k))
            else:
                term = Fraction(v) / k
            acc = acc + term
            res[k - 1] = acc
        return tuple(res)
    acc_c = 0.0 + 0.0j
    res_c = [0.0 + 0.0j] * n
    for k in range(n, 0, -1):
        acc_c += complex(y[k - 1]) / k
        res_c[k - 1] = acc_c
    if all(z.imag == 0.0 for z in res_c):
        return tuple(z.real for z in res_c)
    return tuple(res_c)


def shifted_inverse_section(N: int, mode: str = "rational"
                            ) -> tuple[FiniteSection, FiniteSection]:
    """The forward-difference operator section and its exact inverse.

    The first section has diagonal n/(n+1) and constant off-diagonal
    -1/(n+1) in row n; the second has diagonal (n+1)/n and entry 1/m in
    column m below the diagonal.  Their product is the identity, exactly in
    rational mode.
    """
    if N < 1:
        raise SectionError("dimension must be >= 1")
    _check_mode(mode)
    _check_rational_dim(N, mode)
    if mode == "rational":
        a_rows = []
        b_rows = []
        for n in range(1, N + 1):
            a_row = [Fraction(-1, n + 1)] * (n - 1) + [Fraction(n, n + 1)]
            b_row = [Fraction(1, m) for m in range(1, n)] + [Fraction(n + 1, n)]
            a_rows.append(tuple(a_row))
            b_rows.append(tuple(b_row))
        return (FiniteSection(N, "A", "rational", tuple(a_rows)),
                FiniteSection(N, "B", "rational", tuple(b_rows)))
    a_rows = []
    b_rows = []
    for n in range(1, N + 1):
        a_row = np.full(n, -1.0 / (n + 1))
        a_row[n - 1] = n / (n + 1.0)
        b_row = 1.0 / np.arange(1, n + 1, dtype=float)
        b_row[n - 1] = (n + 1.0) / n
        a_rows.append(a_row)
        b_rows.append(b_row)
    return (FiniteSection(N, "A", "float", tuple(a_rows)),
            FiniteSection(N, "B", "float", tuple(b_rows)))
