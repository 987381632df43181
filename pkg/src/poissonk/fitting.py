"""Ordinary least-squares fits for the growth laws of the first double mode."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataIntegrityError, InvalidParamsError

__all__ = ["Model", "FitResult", "power_law_fit", "linear_fit", "mean_minus_mode_points"]


class Model(enum.Enum):
    POWER_LAW = "powerlaw"
    LINEAR = "linear"


@dataclass(frozen=True)
class FitResult:
    """``coefficients`` is (amplitude, exponent) or (intercept, slope).

    ``residual`` is the RMS of (y - y_fit) / |y| over the input points.
    """

    model: Model
    coefficients: tuple
    residual: float
    n_points: int
    domain: tuple

    def predict(self, x):
        a, b = self.coefficients
        x = np.asarray(x, dtype=float)
        if self.model is Model.POWER_LAW:
            return a * np.power(x, b)
        return a + b * x


def _as_arrays(points):
    pts = sorted((float(x), float(y)) for x, y in points)
    if len(pts) < 3:
        raise InvalidParamsError(f"need at least 3 points, got {len(pts)}")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InvalidParamsError("points must be finite")
    if x[0] == x[-1]:
        raise InvalidParamsError("degenerate abscissa: all x are equal")
    return x, y


def _ols(x, y):
    A = np.column_stack([np.ones_like(x), x])
    (c0, c1), *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(c0), float(c1)


def _rms_relative(y, fit):
    scale = np.where(y != 0.0, np.abs(y), 1.0)
    with np.errstate(over="ignore"):
        r = np.abs((y - fit) / scale)
    top = float(r.max())
    if top == 0.0 or not math.isfinite(top):
        return top
    # scaled by the largest term so squaring cannot overflow
    return top * float(math.sqrt(np.mean((r / top) ** 2)))


def power_law_fit(points) -> FitResult:
    """y = a * x**b by least squares on (ln x, ln y)."""
    x, y = _as_arrays(points)
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise InvalidParamsError("power-law fit needs x > 0 and y > 0")
    c0, b = _ols(np.log(x), np.log(y))
    a = math.exp(c0)
    return FitResult(Model.POWER_LAW, (a, b), _rms_relative(y, a * x**b), len(x), (float(x[0]), float(x[-1])))


def linear_fit(points) -> FitResult:
    """y = c0 + c1 * x by ordinary least squares."""
    x, y = _as_arrays(points)
    c0, c1 = _ols(x, y)
    return FitResult(Model.LINEAR, (c0, c1), _rms_relative(y, c0 + c1 * x), len(x), (float(x[0]), float(x[-1])))


def mean_minus_mode_points(results):
    """(k, mean - m_hat) from first-double-mode results.

    The mode never exceeds the mean, so a point with m_hat >= mean means the
    inputs are corrupt and no fit is attempted.
    """
    pts = []
    for r in results:
        if not r.m_hat < r.mean:
            raise DataIntegrityError(f"k={r.k}: m_hat={r.m_hat} is not below the mean {r.mean!r}")
        pts.append((r.k, r.mean - r.m_hat))
    return pts
