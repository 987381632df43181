"""Mean, variance, median and mode set of one distribution."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .core import EXTENDED_DIGITS, DistParams, _h_raw, default_n_max, h_values_mp
from .errors import AmbiguousTieError, InvalidParamsError

__all__ = ["ModeSummary", "mean", "variance", "median", "mode", "mode_bounds"]

TIE_TOLERANCE = 1e-9
# near-ties inside this multiple of the tolerance are re-evaluated
_ESCALATE_FACTOR = 1e3
_MEDIAN_BAND = 1e-12


@dataclass(frozen=True)
class ModeSummary:
    modes: tuple
    peak_value: float
    tie_tolerance: float
    n_scanned: int
    escalated: bool = False


def mean(params: DistParams) -> float:
    return params.kappa * params.lam


def variance(params: DistParams) -> float:
    k = params.k
    return params.lam * (k * (k + 1) * (2 * k + 1) // 6)


def mode_bounds(params: DistParams):
    """Closed integer range that must contain every mode."""
    top = math.floor(params.lam * params.kappa)
    low = top - params.kappa + 1 - (1 if params.k == 1 else 0)
    return max(0, low), top


def _classify(gaps, tol, digits):
    """Split candidate indices by relative gap to the peak, flag edge cases."""
    edge = mpmath.mpf(10) ** (-(digits - 5))
    members, ambiguous = [], []
    for n, g in gaps:
        if abs(g - tol) < edge:
            ambiguous.append(n)
        elif g <= tol:
            members.append(n)
    return members, ambiguous


def mode(params: DistParams, tie_tolerance: float = TIE_TOLERANCE, digits: int = EXTENDED_DIGITS) -> ModeSummary:
    """All n attaining the global maximum of the pmf.

    Only n <= floor(lam * kappa) can be a mode; one extra index is scanned to
    absorb rounding in the floor. Near-ties are settled in extended precision;
    a tie that stays on the tolerance edge raises
    :class:`~poissonk.errors.AmbiguousTieError`.
    """
    if not 0.0 <= tie_tolerance < 1.0:
        raise InvalidParamsError(f"tie_tolerance must be in [0, 1), got {tie_tolerance!r}")
    k, lam = params.k, params.lam
    n_top = math.floor(lam * params.kappa) + 1
    values, shift = _h_raw(k, lam, n_top)
    peak = float(values.max())
    near = np.flatnonzero(values >= peak * max(0.0, 1.0 - _ESCALATE_FACTOR * tie_tolerance))
    escalated = False
    if len(near) == 1:
        modes = (int(near[0]),)
    else:
        escalated = True
        hmp = h_values_mp(k, lam, int(near[-1]), digits)
        with mpmath.workdps(digits + 5):
            top = max(hmp[int(n)] for n in near)
            gaps = [(int(n), 1 - hmp[int(n)] / top) for n in near]
            members, ambiguous = _classify(gaps, tie_tolerance, digits)
        if ambiguous:
            raise AmbiguousTieError(
                f"tie at lambda={lam!r} (k={k}) unresolved at {digits} digits",
                lam=lam,
                candidates=ambiguous,
            )
        modes = tuple(members)
        peak = float(values[members[0]])
    log_peak = math.log(peak) + shift * math.log(2.0) - k * lam
    return ModeSummary(modes, math.exp(log_peak), tie_tolerance, n_top + 1, escalated)


def _cdf_mp(params: DistParams, n: int, digits: int):
    hmp = h_values_mp(params.k, params.lam, n, digits)
    with mpmath.workdps(digits + 5):
        return mpmath.exp(-params.k * mpmath.mpf(params.lam)) * mpmath.fsum(hmp)


def _cdf(params, n_max):
    values, shift = _h_raw(params.k, params.lam, n_max)
    log_scale = shift * math.log(2.0) - params.k * params.lam
    with np.errstate(under="ignore", divide="ignore"):
        pmf = np.exp(np.log(values) + log_scale)
    return np.cumsum(pmf)


def median(params: DistParams, digits: int = EXTENDED_DIGITS) -> int:
    """Smallest n with P(X <= n) >= 1/2."""
    # |median - mean| <= stddev holds for every distribution
    n_max = math.floor(mean(params) + math.sqrt(variance(params))) + 2
    cdf = _cdf(params, n_max)
    n = int(np.searchsorted(cdf, 0.5, side="left"))
    if n == len(cdf):
        cdf = _cdf(params, default_n_max(params))
        n = int(np.searchsorted(cdf, 0.5, side="left"))
    close = [m for m in (n - 1, n) if 0 <= m < len(cdf) and abs(cdf[m] - 0.5) < _MEDIAN_BAND]
    if not close:
        return n
    half = mpmath.mpf(1) / 2
    edge = mpmath.mpf(10) ** (-(digits - 5))
    for m in sorted(close):
        c = _cdf_mp(params, m, digits)
        if abs(c - half) < edge:
            raise AmbiguousTieError(
                f"CDF({m}) equals 1/2 to {digits} digits (k={params.k}, lambda={params.lam!r})",
                lam=params.lam,
                candidates=(m,),
            )
        if c > half:
            return m
    return max(close) + 1
