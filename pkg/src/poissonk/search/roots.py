"""Unit roots of h_k(n; .), the root r_k and the first double mode."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ..core import EXTENDED_DIGITS, _check_k, _h_raw, h_values_mp
from ..errors import BracketError, InconsistentRootError, InvalidParamsError, PossibleTieError

__all__ = ["DoubleModeResult", "root_rk", "unit_root", "first_double_mode", "ROOT_TOL"]

ROOT_TOL = 1e-12
# |h - 1| below this is re-decided in extended precision
NEAR_ONE = 1e-9
VERIFY_TOL = 1e-10
TIE_GAP = 1e-10


def _h_scaled(k, lam, n_max):
    values, shift = _h_raw(k, lam, n_max)
    return values, math.ldexp(1.0, -shift) if shift < 1000 else 0.0


def _h_at(k, lam, n):
    values, shift = _h_raw(k, lam, n)
    return math.ldexp(float(values[n]), shift) if shift < 1000 else math.inf


def _bisect(f, lo, hi, tol, exact=None):
    """Shrink [lo, hi] around the sign change of an increasing ``f``."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = f(mid)
        if exact is not None and abs(v) < NEAR_ONE:
            v = exact(mid)
        if v > 0:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _polish(k, n, lam, lo, hi, steps=3):
    """Newton steps on h(n; lam) = 1, kept inside [lo, hi]."""
    for _ in range(steps):
        values, one = _h_scaled(k, lam, n)
        dh = float(values[max(0, n - k):n].sum())
        if dh <= 0.0:
            break
        step = (float(values[n]) - one) / dh
        new = min(max(lam - step, lo), hi)
        if new == lam:
            break
        lam = new
    return lam


def _nearest_float(k, n, lam, digits, max_steps=16):
    """Step to the double closest to the root of h(n; .) = 1.

    The result depends only on (k, n), not on the path that led to ``lam``.
    """

    def err(x):
        return abs(h_values_mp(k, x, n, digits)[n] - 1)

    best = err(lam)
    for direction in (math.inf, -math.inf):
        for _ in range(max_steps):
            cand = math.nextafter(lam, direction)
            e = err(cand)
            if e >= best:
                break
            lam, best = cand, e
    return lam


def _unit_root_bracketed(k, n, lo, hi, tol, digits):
    def f(lam):
        return _h_at(k, lam, n) - 1.0

    def exact(lam):
        return h_values_mp(k, lam, n, digits)[n] - 1

    lo, hi = _bisect(f, lo, hi, tol, exact)
    lam = _polish(k, n, 0.5 * (lo + hi), lo, hi)
    return _nearest_float(k, n, lam, digits), hi - lo


def root_rk(k: int, tol: float = ROOT_TOL, digits: int = EXTENDED_DIGITS) -> float:
    """The unique root in (0, 1) of h_k(k; lam) = 1, for k >= 2."""
    k = _check_k(k)
    if k < 2:
        raise InvalidParamsError("r_k is defined for k >= 2")
    kappa = k * (k + 1) // 2
    lo, hi = 1.0 / kappa, 1.0
    if _h_at(k, lo, k) > 1.0 or _h_at(k, hi, k) <= 1.0:
        raise BracketError(f"h_{k}({k}; .) - 1 does not change sign on [1/kappa, 1)")
    lam, _ = _unit_root_bracketed(k, k, lo, hi, tol, digits)
    return lam


def unit_root(k: int, n: int, tol: float = ROOT_TOL, digits: int = EXTENDED_DIGITS) -> float:
    """The unique lam > 0 with h_k(n; lam) = 1."""
    k = _check_k(k)
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParamsError(f"n must be an integer >= 1, got {n!r}")
    n = int(n)
    lo, hi = 0.0, 1.0
    while _h_at(k, hi, n) < 1.0:
        lo, hi = hi, 2.0 * hi
    lam, _ = _unit_root_bracketed(k, n, lo, hi, tol, digits)
    return lam


@dataclass(frozen=True)
class DoubleModeResult:
    """First lam at which {0, m_hat} are joint modes."""

    k: int
    m_hat: int
    lambda_hat: float
    bracket_width: float
    runner_up_gap: float
    runner_up_n: int
    r_k: float
    n_ceiling: int

    @property
    def kappa(self) -> int:
        return self.k * (self.k + 1) // 2

    @property
    def mean(self) -> float:
        return self.kappa * self.lambda_hat


def _max_h_minus_one(k, lam, n_lo, n_hi, skip=None):
    values, one = _h_scaled(k, lam, n_hi)
    seg = values[n_lo:n_hi + 1]
    if skip is not None:
        seg = seg.copy()
        seg[skip - n_lo] = 0.0
    i = int(seg.argmax())
    return float(seg[i]) / one - 1.0 if one > 0.0 else math.inf, n_lo + i, seg, one


def _max_h_minus_one_mp(k, lam, n_lo, n_hi, digits, skip=None):
    # only indices already close to the float maximum can win
    _, _, seg, one = _max_h_minus_one(k, lam, n_lo, n_hi, skip)
    top = float(seg.max())
    cand = [n_lo + int(i) for i in np.flatnonzero(seg >= top * (1.0 - 1e-6))]
    hmp = h_values_mp(k, lam, max(cand), digits)
    with mpmath.workdps(digits + 5):
        return max(hmp[n] for n in cand) - 1


def _unit_root_mp(k, n, guess, digits, steps=6):
    with mpmath.workdps(digits + 5):
        lam = mpmath.mpf(guess)
        for _ in range(steps):
            h = h_values_mp(k, lam, n, digits + 5)
            dh = mpmath.fsum(h[max(0, n - k):n])
            lam -= (h[n] - 1) / dh
        return lam


def first_double_mode(k: int, tol: float = ROOT_TOL, digits: int = EXTENDED_DIGITS) -> DoubleModeResult:
    """Locate (m_hat, lambda_hat): the smallest lam at which some n > 0 ties with 0.

    Every h_k(n; .) is strictly increasing, so lambda_hat is the minimum of
    the unit roots over n. Equivalently it is the root of
    ``max_n h_k(n; lam) = 1``, which one bisection finds without computing
    each unit root separately. The scan stops at N = floor(r_k kappa) + k:
    no mode can exceed the mean, and lambda_hat <= r_k.
    """
    k = _check_k(k)
    if k < 2:
        raise InvalidParamsError("the first double mode is defined for k >= 2")
    kappa = k * (k + 1) // 2
    rk = root_rk(k, tol, digits)
    n_top = math.floor(rk * kappa) + k

    def f(lam):
        return _max_h_minus_one(k, lam, 1, n_top)[0]

    def exact(lam):
        return _max_h_minus_one_mp(k, lam, 1, n_top, digits)

    lo, hi = 1.0 / kappa, rk
    if f(lo) > 0.0:
        raise BracketError(f"k={k}: some h(n; 1/kappa) already exceeds 1")
    for _ in range(8):
        if f(hi) > 0.0:
            break
        hi += tol
    else:
        raise BracketError(f"k={k}: no h(n; r_k) reaches 1")
    lo, hi = _bisect(f, lo, hi, tol, exact)
    width = hi - lo
    _, m_hat, _, _ = _max_h_minus_one(k, hi, 1, n_top)
    lam_hat = _nearest_float(k, m_hat, _polish(k, m_hat, 0.5 * (lo + hi), lo, hi), digits)

    values, one = _h_scaled(k, lam_hat, n_top)
    excess = float(values[1:].max()) / one - 1.0
    err = abs(float(values[m_hat]) / one - 1.0)
    if excess > VERIFY_TOL or err > VERIFY_TOL:
        raise InconsistentRootError(
            f"k={k}: at lambda_hat={lam_hat!r} max h - 1 = {excess:.3e}, "
            f"|h(m_hat) - 1| = {err:.3e}; extended precision needed"
        )

    # runner-up: the next unit root among n in [k, N], n != m_hat
    def f2(lam):
        return _max_h_minus_one(k, lam, k, n_top, skip=m_hat)[0]

    def exact2(lam):
        return _max_h_minus_one_mp(k, lam, k, n_top, digits, skip=m_hat)

    lo2, hi2 = lam_hat, max(rk, lam_hat)
    while f2(hi2) <= 0.0:
        lo2, hi2 = hi2, 2.0 * hi2
    if f2(lo2) > 0.0:
        lam_r, n_r = lo2, _max_h_minus_one(k, lo2, k, n_top, skip=m_hat)[1]
    else:
        lo2, hi2 = _bisect(f2, lo2, hi2, tol, exact2)
        n_r = _max_h_minus_one(k, hi2, k, n_top, skip=m_hat)[1]
        lam_r = _polish(k, n_r, 0.5 * (lo2 + hi2), lo2, hi2)
    gap = lam_r - lam_hat
    if gap < TIE_GAP:
        a = _unit_root_mp(k, m_hat, lam_hat, digits)
        b = _unit_root_mp(k, n_r, lam_r, digits)
        gap_mp = float(b - a)
        # a gap below 1e-10 only triggers escalation; it is a tie only when
        # extended precision cannot separate the two roots either
        if abs(gap_mp) <= 10.0 ** (5 - digits) * float(a):
            raise PossibleTieError(
                f"k={k}: unit roots of n={m_hat} and n={n_r} agree to {abs(gap_mp):.2e}",
                lam=lam_hat,
                candidates=(m_hat, n_r),
            )
        if gap_mp < 0:
            m_hat, n_r, lam_hat = n_r, m_hat, float(b)
        gap = abs(gap_mp)
    return DoubleModeResult(k, m_hat, lam_hat, width, gap, n_r, rk, n_top)
