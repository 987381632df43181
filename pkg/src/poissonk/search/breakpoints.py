"""The mode m_k(lam) as a step function of lam.

A uniform grid with step 1/(4 kappa) is evaluated in one vectorized pass
(columns = lam values); transitions between grid points are then bisected, again
vectorized over all pending intervals, and each localized breakpoint is
polished with Newton steps on log h(b) - log h(a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..core import EXTENDED_DIGITS, _check_k, _h_raw, h_values_mp
from ..errors import InvalidParamsError, UnresolvedTransitionError
from .roots import ROOT_TOL

__all__ = ["BreakpointMap", "MultimodalCandidate", "mode_breakpoints", "scan_multimodal", "mode_argmax"]

BREAKPOINT_TIE = 1e-10
LAMBDA_MIN = 1e-6
OVERSAMPLE = 4
# columns per vectorized pass; bounds memory to k * _CHUNK floats
_CHUNK = 1 << 16


def _argmax_block(k, lams, lims):
    """Index of the largest h(n; lam) over 0 <= n <= lim, per column.

    ``lims`` must be sorted ascending. Only the last k rows are kept; a column
    whose running peak passes 1e100 is divided by it.
    """
    G = len(lams)
    N = int(lims[-1]) if G else 0
    ring = np.zeros((k, G))
    ring[0] = 1.0
    best = np.ones(G)
    arg = np.zeros(G, dtype=np.int64)
    rows = np.arange(k)
    starts = np.searchsorted(lims, np.arange(N + 2), side="left")
    for n in range(1, N + 1):
        s = starts[n]
        if s == G:
            break
        # ring row i holds h(n - j) with j = (n - 1 - i) mod k + 1
        w = ((n - 1 - rows) % k + 1).astype(float)
        new = w @ ring[:, s:]
        new *= lams[s:]
        new *= 1.0 / n
        ring[n % k, s:] = new
        bs = best[s:]
        better = new > bs
        if better.any():
            np.copyto(bs, new, where=better)
            arg[s:][better] = n
        if n % 8 == 0:
            big = bs > 1e100
            if big.any():
                cols = np.flatnonzero(big) + s
                scale = best[cols]
                ring[:, cols] /= scale
                best[cols] = 1.0
    return arg


def mode_argmax(k: int, lams) -> np.ndarray:
    """Smallest index of the pmf maximum at each lam (vectorized)."""
    k = _check_k(k)
    lams = np.asarray(lams, dtype=float)
    kappa = k * (k + 1) // 2
    lims = np.floor(lams * kappa).astype(np.int64) + 1
    order = np.argsort(lims, kind="stable")
    out = np.empty(len(lams), dtype=np.int64)
    for start in range(0, len(order), _CHUNK):
        idx = order[start:start + _CHUNK]
        out[idx] = _argmax_block(k, lams[idx], lims[idx])
    return out


@dataclass(frozen=True)
class BreakpointMap:
    """Step function lam -> mode set on (0, lambda_max].

    ``mode_sets[i]`` holds on the open interval between ``breakpoints[i-1]``
    and ``breakpoints[i]`` (with 0 and ``lambda_max`` at the ends).
    ``tie_sets[i]`` are the integers tied at ``breakpoints[i]``; ``widths[i]``
    is the final bracket on it (grid step if it was not refined).
    """

    k: int
    lambda_max: float
    breakpoints: tuple
    mode_sets: tuple
    tie_sets: tuple = field(default=())
    widths: tuple = field(default=())
    ambiguous: tuple = field(default=())

    def mode_set_at(self, lam: float) -> frozenset:
        i = int(np.searchsorted(np.asarray(self.breakpoints), lam, side="right"))
        return self.mode_sets[i]

    def attained(self) -> set:
        out = set()
        for s in self.mode_sets:
            out.update(s)
        return out


@dataclass(frozen=True)
class MultimodalCandidate:
    lam: float
    modes: frozenset
    ambiguous: bool = False


def _skips(a, b, attained):
    lo, hi = (a, b) if a < b else (b, a)
    return any(m not in attained for m in range(lo + 1, hi))


def _refine(k, pending, tol, attained, gaps_only):
    """Bisect every (lo, hi, a, b) until the bracket is below ``tol``."""
    done = []
    while pending:
        if gaps_only:
            keep = []
            for p in pending:
                (keep if _skips(p[2], p[3], attained) else done).append(p)
            pending = keep
        active = [p for p in pending if p[1] - p[0] > tol]
        done.extend(p for p in pending if p[1] - p[0] <= tol)
        if not active:
            break
        mids = np.array([0.5 * (p[0] + p[1]) for p in active])
        for p, m in zip(active, mids):
            if m <= p[0] or m >= p[1]:
                raise UnresolvedTransitionError(
                    f"k={k}: transition {p[2]} -> {p[3]} not separable at float resolution",
                    lam=float(m),
                )
        arg = mode_argmax(k, mids)
        attained.update(int(c) for c in arg)
        pending = []
        for (lo, hi, a, b), m, c in zip(active, mids, arg):
            c = int(c)
            if c == a:
                pending.append((m, hi, a, b))
            elif c == b:
                pending.append((lo, m, a, b))
            else:
                pending.append((lo, m, a, c))
                pending.append((m, hi, c, b))
    done.sort()
    return done


def _polish_pair(k, a, b, lam, lo, hi, steps=4):
    """Newton on log h(b) - log h(a) = 0, kept inside [lo, hi]."""
    top = max(a, b)
    for _ in range(steps):
        values, _ = _h_raw(k, lam, top)
        ha, hb = float(values[a]), float(values[b])
        if ha <= 0.0 or hb <= 0.0:
            break
        da = float(values[max(0, a - k):a].sum()) / ha if a else 0.0
        db = float(values[max(0, b - k):b].sum()) / hb if b else 0.0
        if db == da:
            break
        new = min(max(lam - math.log(hb / ha) / (db - da), lo), hi)
        if new == lam:
            break
        lam = new
    return lam


def _tie_set(k, a, b, lam, tie_tol, digits):
    """Integers tied with the maximum at lam; flags edge-of-tolerance cases."""
    kappa = k * (k + 1) // 2
    n_top = max(math.floor(lam * kappa) + 1, a, b)
    values, _ = _h_raw(k, lam, n_top)
    peak = float(values.max())
    near = set(int(n) for n in np.flatnonzero(values >= peak * (1.0 - 1e3 * tie_tol)))
    if near <= {a, b}:
        ties = {n for n in near if values[n] >= peak * (1.0 - tie_tol)} | {a, b}
        return frozenset(ties), False
    hmp = h_values_mp(k, lam, max(near), digits)
    with mpmath.workdps(digits + 5):
        top = max(hmp[n] for n in near)
        gaps = {n: float(1 - hmp[n] / top) for n in near}
    ties = {n for n, g in gaps.items() if g <= tie_tol}
    ambiguous = any(tie_tol < g <= 1e3 * tie_tol for g in gaps.values())
    return frozenset(ties | {a, b}), ambiguous


def mode_breakpoints(
    k: int,
    lambda_max: float,
    tol: float = ROOT_TOL,
    *,
    lambda_min: float = LAMBDA_MIN,
    oversample: int = OVERSAMPLE,
    gaps_only: bool = False,
    tie_tol: float = BREAKPOINT_TIE,
    digits: int = EXTENDED_DIGITS,
) -> BreakpointMap:
    """Walk lam over [lambda_min, lambda_max] and localize every mode change.

    With ``gaps_only`` only transitions that jump over an integer not yet seen
    as a mode are bisected; the others keep their grid bracket. That is all
    the excluded-value search needs.
    """
    k = _check_k(k)
    if not (lambda_max > 0.0 and math.isfinite(lambda_max)):
        raise InvalidParamsError(f"lambda_max must be finite and > 0, got {lambda_max!r}")
    kappa = k * (k + 1) // 2
    step = 1.0 / (oversample * kappa)
    lo_end = min(lambda_min, 0.5 * lambda_max)
    grid = np.arange(lo_end, lambda_max, step)
    if grid[-1] < lambda_max:
        grid = np.append(grid, lambda_max)
    arg = mode_argmax(k, grid)
    attained = set(int(a) for a in arg)
    pending = [
        (float(grid[i]), float(grid[i + 1]), int(arg[i]), int(arg[i + 1]))
        for i in np.flatnonzero(arg[1:] != arg[:-1])
    ]
    done = _refine(k, pending, tol, attained, gaps_only)

    breakpoints, ties, widths, amb = [], [], [], []
    mode_sets = [frozenset({int(arg[0])})]
    for lo, hi, a, b in done:
        localized = hi - lo <= tol
        lam = _polish_pair(k, a, b, 0.5 * (lo + hi), lo, hi) if localized else 0.5 * (lo + hi)
        if localized:
            tie, flag = _tie_set(k, a, b, lam, tie_tol, digits)
        else:
            tie, flag = frozenset({a, b}), False
        breakpoints.append(float(lam))
        ties.append(tie)
        widths.append(float(hi - lo))
        amb.append(flag)
        mode_sets.append(frozenset({b}))
    return BreakpointMap(
        k,
        float(lambda_max),
        tuple(breakpoints),
        tuple(mode_sets),
        tuple(ties),
        tuple(widths),
        tuple(amb),
    )


def scan_multimodal(
    k: int,
    lambda_max: float,
    arity: int = 3,
    tol: float = ROOT_TOL,
    *,
    tie_tol: float = BREAKPOINT_TIE,
    digits: int = EXTENDED_DIGITS,
) -> list:
    """Breakpoints whose tie set has at least ``arity`` members.

    An empty list means none were found on the grid, not that none exist.
    """
    if isinstance(arity, bool) or not isinstance(arity, int) or arity < 2:
        raise InvalidParamsError(f"arity must be an integer >= 2, got {arity!r}")
    bmap = mode_breakpoints(k, lambda_max, tol, tie_tol=tie_tol, digits=digits)
    return [
        MultimodalCandidate(lam, tie, flag)
        for lam, tie, flag in zip(bmap.breakpoints, bmap.tie_sets, bmap.ambiguous)
        if len(tie) >= arity
    ]
