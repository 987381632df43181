import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poissonk.errors import DataIntegrityError, InvalidParamsError
from poissonk.fitting import Model, linear_fit, mean_minus_mode_points, power_law_fit
from poissonk.search import first_double_mode
from poissonk.search.roots import DoubleModeResult


def test_power_law_exact():
    pts = [(x, 2.0 * x**3) for x in (1.0, 2.0, 5.0, 10.0)]
    fit = power_law_fit(pts)
    a, b = fit.coefficients
    assert fit.model is Model.POWER_LAW
    assert a == pytest.approx(2.0, rel=1e-10)
    assert b == pytest.approx(3.0, rel=1e-10)
    assert fit.residual < 1e-12
    assert fit.n_points == 4 and fit.domain == (1.0, 10.0)


def test_linear_exact():
    fit = linear_fit([(x, 3.0 + 0.5 * x) for x in range(10)])
    c0, c1 = fit.coefficients
    assert c0 == pytest.approx(3.0, abs=1e-10)
    assert c1 == pytest.approx(0.5, abs=1e-10)
    assert fit.residual < 1e-12


def test_linear_residual_is_rms_relative():
    pts = [(0.0, 1.0), (1.0, 3.0), (2.0, 3.0)]
    fit = linear_fit(pts)
    y = np.array([1.0, 3.0, 3.0])
    pred = fit.predict([0.0, 1.0, 2.0])
    assert fit.residual == pytest.approx(math.sqrt(np.mean(((y - pred) / y) ** 2)))


@given(
    st.floats(0.1, 10.0),
    st.floats(-3.0, 3.0),
    st.lists(st.floats(0.1, 1e3), min_size=3, max_size=20, unique=True),
)
def test_power_law_recovery(a, b, xs):
    if max(xs) / min(xs) < 1.5:
        return
    fit = power_law_fit([(x, a * x**b) for x in xs])
    assert fit.coefficients[0] == pytest.approx(a, rel=1e-8)
    assert fit.coefficients[1] == pytest.approx(b, abs=1e-9)


@given(st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)), min_size=3, max_size=15), st.randoms())
def test_order_invariance(pts, rnd):
    if len({x for x, _ in pts}) < 2:
        return
    shuffled = pts[:]
    rnd.shuffle(shuffled)
    assert linear_fit(pts) == linear_fit(shuffled)


@pytest.mark.parametrize(
    "pts",
    [
        [(1.0, 1.0), (2.0, 2.0)],
        [(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)],
        [(1.0, 1.0), (2.0, math.nan), (3.0, 3.0)],
    ],
)
def test_linear_rejects(pts):
    with pytest.raises(InvalidParamsError):
        linear_fit(pts)


@pytest.mark.parametrize("pts", [[(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)], [(0.0, 1.0), (2.0, 2.0), (3.0, 3.0)]])
def test_power_law_rejects_nonpositive(pts):
    with pytest.raises(InvalidParamsError):
        power_law_fit(pts)


def test_mean_minus_mode_points():
    results = [first_double_mode(k) for k in (10, 20, 30)]
    pts = mean_minus_mode_points(results)
    assert [p[0] for p in pts] == [10, 20, 30]
    assert all(y > 0 for _, y in pts)


def test_mean_minus_mode_rejects_corrupt():
    bad = DoubleModeResult(k=5, m_hat=20, lambda_hat=0.1, bracket_width=1e-12, runner_up_gap=0.01, runner_up_n=6, r_k=0.2, n_ceiling=8)
    with pytest.raises(DataIntegrityError):
        mean_minus_mode_points([bad])
