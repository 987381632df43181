"""Integers that are never modes, and numerical checks of the mode conjectures."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..core import EXTENDED_DIGITS, DistParams, _check_k
from ..errors import InvalidParamsError
from ..stats import mode
from .breakpoints import mode_breakpoints
from .roots import ROOT_TOL, first_double_mode

__all__ = [
    "CeilingSource",
    "ExcludedReport",
    "excluded_values",
    "default_n_upper",
    "conjectured_mode",
    "check_mode_conjecture",
    "conjecture_samples",
    "check_single_interval",
    "check_k_plus_one",
    "SINGLE_INTERVAL_FROM",
]

SINGLE_INTERVAL_FROM = 42


class CeilingSource(enum.Enum):
    MODE_CONJECTURE = "mode-conjecture"
    USER = "user"


@dataclass(frozen=True)
class ExcludedReport:
    k: int
    intervals: tuple
    n_upper: int
    ceiling_source: CeilingSource

    def contains(self, m: int) -> bool:
        return any(lo <= m <= hi for lo, hi in self.intervals)

    def format(self) -> str:
        return " ".join(f"[{lo},{hi}]" for lo, hi in self.intervals)


def default_n_upper(k: int) -> int:
    """Above this every integer is a mode, if the large-lam mode formula holds."""
    return k * (k + 1) - (3 * k + 5) // 8


def conjectured_mode(k: int, n: int) -> int:
    """Predicted mode at lam = n / kappa for n >= 2 kappa."""
    return n - (3 * k + 5) // 8


def _intervals(excluded):
    out = []
    for m in excluded:
        if out and out[-1][1] == m - 1:
            out[-1][1] = m
        else:
            out.append([m, m])
    return tuple((a, b) for a, b in out)


def excluded_values(
    k: int,
    n_upper: int | None = None,
    tol: float = ROOT_TOL,
    digits: int = EXTENDED_DIGITS,
) -> ExcludedReport:
    """Positive integers <= n_upper that are not a mode for any lam > 0.

    The walk stops at lam = (n_upper + kappa) / kappa: past it the lower mode
    bound floor(lam kappa) - kappa + 1 already exceeds n_upper.
    """
    k = _check_k(k)
    if k < 2:
        raise InvalidParamsError("excluded values are only nontrivial for k >= 2")
    source = CeilingSource.USER
    if n_upper is None:
        n_upper, source = default_n_upper(k), CeilingSource.MODE_CONJECTURE
    if n_upper < 1:
        raise InvalidParamsError(f"n_upper must be >= 1, got {n_upper}")
    kappa = k * (k + 1) // 2
    lam_stop = (n_upper + kappa) / kappa
    bmap = mode_breakpoints(k, lam_stop, tol, gaps_only=True, digits=digits)
    attained = bmap.attained()
    missing = [m for m in range(1, n_upper + 1) if m not in attained]
    return ExcludedReport(k, _intervals(missing), n_upper, source)


def check_mode_conjecture(k: int, n: int, digits: int = EXTENDED_DIGITS) -> bool:
    """True iff the mode at lam = n / kappa is exactly {n - floor((3k+5)/8)}."""
    k = _check_k(k)
    kappa = k * (k + 1) // 2
    if k < 2 or n < 2 * kappa:
        raise InvalidParamsError(f"needs k >= 2 and n >= 2 kappa = {2 * kappa}, got k={k}, n={n}")
    got = mode(DistParams(k, n / kappa), digits=digits).modes
    return got == (conjectured_mode(k, n),)


def conjecture_samples(k: int, count: int = 10, span: int = 4):
    """``count`` deterministic n values spread over [2 kappa, (2 + span) kappa]."""
    kappa = k * (k + 1) // 2
    if count == 1:
        return [2 * kappa]
    return [2 * kappa + round(i * span * kappa / (count - 1)) for i in range(count)]


def check_single_interval(k: int, report: ExcludedReport | None = None, m_hat: int | None = None):
    """Whether [1, m_hat - 1] is the only excluded interval; None below k = 42."""
    if k < SINGLE_INTERVAL_FROM:
        return None
    if report is None:
        report = excluded_values(k)
    if m_hat is None:
        m_hat = first_double_mode(k).m_hat
    return report.intervals == ((1, m_hat - 1),)


def check_k_plus_one(k: int, report: ExcludedReport | None = None) -> bool:
    if report is None:
        report = excluded_values(k)
    return report.contains(k + 1)
