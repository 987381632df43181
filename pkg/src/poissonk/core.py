"""Evaluation of h_k(n; lam) and the pmf f_k(n; lam) = exp(-k lam) h_k(n; lam).

Two independent routes are kept:

* the compound-Poisson probability recurrence
  ``n h(n) = lam * sum_{j=1..min(k,n)} j h(n-j)``, run forward in double
  precision with a shared power-of-two exponent ledger (the fast path);
* the recurrence in the order ``k`` obtained by conditioning on the number
  of jumps of size ``k``. It is used in exact rational arithmetic
  (:func:`h_polynomial`) and, in probability form, as the float cross-check.
"""

from __future__ import annotations

import enum
from collections import deque
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.stats import poisson

from .errors import CrossCheckError, InvalidParamsError, UnsupportedRangeError

__all__ = [
    "DistParams",
    "Kind",
    "ScaledSeries",
    "HPolynomial",
    "h_series",
    "pmf_series",
    "h_polynomial",
    "h_values_mp",
    "default_n_max",
    "EXTENDED_DIGITS",
]

EXTENDED_DIGITS = 30
CROSS_CHECK_RTOL = 1e-10
EXACT_N_CAP = 64

# running maximum is kept inside [1e-100, 1e100]; h(0) = 1 pins the low side
_RENORM_HI = 1e100
# below this (pmf scale) a cross-check entry may carry underflowed terms
_CHECK_FLOOR = 1e-200
# tail mass allowed beyond the default cut-off in the jump count
_JUMP_TAIL = 1e-13
_MP_GUARD_BITS = 64
_MP_HEADROOM_BITS = 256
_MP_REFILL_BITS = 128
_LN2 = math.log(2.0)


def _check_k(k):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise InvalidParamsError(f"k must be an integer, got {k!r}")
    if k < 1:
        raise InvalidParamsError(f"k must be >= 1, got {k}")
    return int(k)


def _check_n(n, name="n_max"):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidParamsError(f"{name} must be an integer, got {n!r}")
    if n < 0:
        raise InvalidParamsError(f"{name} must be >= 0, got {n}")
    return int(n)


@dataclass(frozen=True)
class DistParams:
    """Order ``k`` and rate ``lam`` of one Poisson distribution of order k."""

    k: int
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "k", _check_k(self.k))
        try:
            lam = float(self.lam)
        except (TypeError, ValueError):
            raise InvalidParamsError(f"lambda must be a real number, got {self.lam!r}")
        if not math.isfinite(lam) or lam <= 0.0:
            raise InvalidParamsError(f"lambda must be finite and > 0, got {self.lam!r}")
        object.__setattr__(self, "lam", lam)

    @property
    def kappa(self) -> int:
        return self.k * (self.k + 1) // 2


class Kind(enum.Enum):
    PMF = "pmf"
    H = "h"


@dataclass(frozen=True, eq=False)
class ScaledSeries:
    """Values for n = 0..N, true value = ``values[n] * exp(log_scale)``."""

    values: np.ndarray
    log_scale: float
    params: DistParams
    kind: Kind

    def __len__(self):
        return len(self.values)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def rescaled(self) -> np.ndarray:
        """True values as plain floats (may under- or overflow)."""
        with np.errstate(over="ignore", under="ignore"):
            if abs(self.log_scale) < 700.0:
                return self.values * math.exp(self.log_scale)
            return np.exp(self.log_values())

    def log_values(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.values) + self.log_scale

    def value(self, n: int) -> float:
        return float(self.rescaled()[n])


def default_n_max(params: DistParams) -> int:
    """Cut-off covering the mean plus a wide Gaussian-scale tail.

    For small lam and large k the tail is made of rare multi-jump paths that
    a Gaussian scale misses, so the cut-off is also at least k times a far
    quantile of the number of jumps, which is Poisson(k * lam).
    """
    k, lam = params.k, params.lam
    var = lam * k * (k + 1) * (2 * k + 1) / 6.0
    gaussian = math.ceil(params.kappa * lam) + max(50, math.ceil(20.0 * math.sqrt(var)))
    jumps = int(poisson.isf(_JUMP_TAIL, k * lam)) + 1
    return max(gaussian, k * jumps)


def _h_raw(k: int, lam: float, n_max: int):
    """Forward probability recurrence for h.

    Returns ``(values, shift)`` with ``h(n) = values[n] * 2**shift``. All terms
    are positive, so the recurrence is forward stable.
    """
    h = np.zeros(n_max + 1)
    h[0] = 1.0
    w = np.arange(k, 0, -1, dtype=float)
    shift = 0
    peak = 1.0
    for n in range(1, n_max + 1):
        lo = n - k if n > k else 0
        v = lam * float(w[k - (n - lo):] @ h[lo:n]) / n
        h[n] = v
        if v > peak:
            peak = v
            if peak > _RENORM_HI:
                e = math.frexp(peak)[1]
                with np.errstate(under="ignore"):
                    h[: n + 1] = np.ldexp(h[: n + 1], -e)
                shift += e
                peak = math.ldexp(peak, -e)
    return h, shift


def _h_derivative(values: np.ndarray, k: int, n: int) -> float:
    """d/dlam h(n; lam) in the same scale as ``values``.

    From the generating function exp(lam * (z + ... + z**k)):
    dh(n)/dlam = h(n-1) + ... + h(n-k).
    """
    lo = max(0, n - k)
    return float(values[lo:n].sum())


def _pmf_by_order(k: int, lam: float, n_max: int):
    """pmf of order K = min(k, n_max) built one jump size at a time.

    Adding jump size j convolves with a Poisson(lam) count placed on multiples
    of j. Returns ``(p, K)``; on 0..n_max the order-k pmf is
    ``p * exp(-(k - K) * lam)``.
    """
    K = min(k, n_max)
    p = np.zeros(n_max + 1)
    p[0] = 1.0
    if K == 0:
        return p, 0
    wts = poisson.pmf(np.arange(n_max + 1), lam)
    nz = np.flatnonzero(wts)
    for j in range(1, K + 1):
        q = np.zeros_like(p)
        for m in nz:
            off = int(m) * j
            if off > n_max:
                break
            q[off:] += wts[m] * p[: n_max + 1 - off]
        p = q
    return p, K


def _cross_check(values: np.ndarray, shift: int, k: int, lam: float, rtol=CROSS_CHECK_RTOL):
    n_max = len(values) - 1
    p, K = _pmf_by_order(k, lam, n_max)
    with np.errstate(divide="ignore"):
        log_a = np.log(values) + shift * _LN2
        log_b = np.log(p) + K * lam
    ok = (p > _CHECK_FLOOR) & (values > 1e-290)
    if not ok.any():
        return
    diff = np.abs(np.expm1(log_a[ok] - log_b[ok]))
    worst = float(diff.max())
    if worst > rtol:
        n_bad = int(np.flatnonzero(ok)[int(diff.argmax())])
        raise CrossCheckError(
            f"recurrences disagree at n={n_bad} (k={k}, lambda={lam!r}): "
            f"relative difference {worst:.3e} > {rtol:g}"
        )


def h_series(params: DistParams, n_max: int, verify: bool = True) -> ScaledSeries:
    """h_k(n; lam) for n = 0..n_max.

    With ``verify`` the result is checked against the order recurrence and a
    :class:`~poissonk.errors.CrossCheckError` is raised on disagreement
    beyond 1e-10 relative.
    """
    n_max = _check_n(n_max)
    values, shift = _h_raw(params.k, params.lam, n_max)
    if verify:
        _cross_check(values, shift, params.k, params.lam)
    return ScaledSeries(values, shift * _LN2, params, Kind.H)


def pmf_series(params: DistParams, n_max: int | None = None, verify: bool = True) -> ScaledSeries:
    """f_k(n; lam) for n = 0..n_max (default :func:`default_n_max`)."""
    if n_max is None:
        n_max = default_n_max(params)
    hs = h_series(params, n_max, verify=verify)
    log_scale = hs.log_scale - params.k * params.lam
    return ScaledSeries(hs.values, log_scale, params, Kind.PMF)


def _mp_step(man: int, exp: int, s_sum: int, n: int) -> int:
    num = man * s_sum
    return (num << exp) // n if exp >= 0 else num // (n << -exp)


def h_values_mp(k: int, lam, n_max: int, digits: int = EXTENDED_DIGITS):
    """h_k(0..n_max; lam) as mpmath numbers in extended precision.

    ``lam`` is taken at its exact binary value (float or mpf). The recurrence
    runs in integer fixed point with sliding window sums, so each step is O(1)
    and sums of stored terms are exact. Precision is at least ``digits``
    significant digits for every entry: the scale follows the window up and
    down.
    """
    k = _check_k(k)
    n_max = _check_n(n_max)
    man, exp = mpmath.mpf(lam).man_exp
    if man <= 0:
        raise InvalidParamsError(f"lambda must be > 0, got {lam!r}")
    bits = math.ceil(digits * math.log2(10)) + _MP_GUARD_BITS
    # true h(n) = ints[n] * 2**(shifts[n] - bits); window holds the last k
    # values at the current shift, s_sum = S_{n} = sum_i i * H(n - i)
    one = 1 << bits
    ints, shifts = [one], [0]
    window = deque([one], maxlen=k)
    w_sum = s_sum = one
    shift, dirty = 0, False
    for n in range(1, n_max + 1):
        if dirty:
            s_sum = sum(i * v for i, v in enumerate(reversed(window), start=1))
            dirty = False
        h = _mp_step(man, exp, s_sum, n)
        deficit = bits + _MP_REFILL_BITS - h.bit_length()
        if deficit > _MP_REFILL_BITS:
            # decaying tail: rescale up so each term keeps full precision
            shift -= deficit
            for i in range(len(window)):
                window[i] <<= deficit
            w_sum <<= deficit
            s_sum <<= deficit
            h = _mp_step(man, exp, s_sum, n)
        evicted = window[0] if len(window) == k else 0
        window.append(h)
        w_sum += h - evicted
        # S_{n+1} = S_n + W_n - k * H(n - k)
        s_sum += w_sum - k * evicted
        ints.append(h)
        shifts.append(shift)
        excess = h.bit_length() - bits - _MP_HEADROOM_BITS
        if excess > 0:
            shift += excess
            for i in range(len(window)):
                window[i] >>= excess
            w_sum = sum(window)
            dirty = True
    out = []
    with mpmath.workdps(digits + 5):
        for v, sh in zip(ints, shifts):
            out.append(mpmath.mpf((v, sh - bits)))
    return out


@dataclass(frozen=True)
class HPolynomial:
    """Exact coefficients of h_k(n; lam); ``coeffs[j]`` multiplies lam**j."""

    k: int
    n: int
    coeffs: tuple

    @property
    def degree(self) -> int:
        return self.n

    def __call__(self, lam):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc


@lru_cache(maxsize=None)
def _poly(order: int, n: int) -> tuple:
    # polynomials are identical for every order >= n
    order = min(order, n)
    if n == 0:
        return (Fraction(1),)
    if order == 0:
        return (Fraction(0),) * (n + 1)
    out = [Fraction(0)] * (n + 1)
    fact = 1
    for t in range(0, n // order + 1):
        if t:
            fact *= t
        sub = _poly(order - 1, n - order * t)
        for j, c in enumerate(sub):
            if c:
                out[j + t] += c / fact
    return tuple(out)


def h_polynomial(k: int, n: int) -> HPolynomial:
    """Exact h_k(n; .) built from the recurrence in the order k.

    Limited to n <= 64; coefficient sizes grow quickly past that.
    """
    k = _check_k(k)
    n = _check_n(n, "n")
    if n > EXACT_N_CAP:
        raise UnsupportedRangeError(f"exact polynomials are limited to n <= {EXACT_N_CAP}, got {n}")
    return HPolynomial(k, n, _poly(k, n))
