import math

import numpy as np
import pytest

from cyltomo.grid import GridAxis, TWO_PI, wrap_angle


def test_wrap_angle_identity_cases():
    assert wrap_angle(0.0, TWO_PI) == 0.0
    assert wrap_angle(TWO_PI, TWO_PI) == 0.0
    assert wrap_angle(-math.pi / 2, TWO_PI) == pytest.approx(4.7123889803846899, abs=1e-15)


def test_wrap_angle_congruence_and_range():
    rng = np.random.default_rng(7)
    x = rng.uniform(-50, 50, size=500)
    w = wrap_angle(x)
    assert np.all(w >= 0.0) and np.all(w < TWO_PI)
    k = np.round((x - w) / TWO_PI)
    assert np.allclose(w + TWO_PI * k, x, atol=1e-12)


def test_wrap_angle_other_periods():
    assert wrap_angle(7.5, 3.0) == pytest.approx(1.5)
    assert wrap_angle(-0.25, 1.0) == pytest.approx(0.75)


def test_wrap_angle_bad_period():
    with pytest.raises(ValueError):
        wrap_angle(1.0, 0.0)
    with pytest.raises(ValueError):
        wrap_angle(1.0, -2.0)


def test_axis_validation():
    with pytest.raises(ValueError):
        GridAxis(start=0.0, step=0.0, count=4)
    with pytest.raises(ValueError):
        GridAxis(start=0.0, step=0.1, count=1)


def test_periodic_axis_period_and_points():
    ax = GridAxis.angle_axis(8)
    assert ax.periodic
    assert ax.period == pytest.approx(TWO_PI)
    assert ax.step * ax.count == pytest.approx(TWO_PI)
    pts = ax.points()
    assert pts.shape == (8,)
    assert pts[0] == 0.0
    # no duplicated endpoint on periodic axes
    assert pts[-1] == pytest.approx(TWO_PI - ax.step)


def test_linspace_axis_endpoints():
    ax = GridAxis.linspace(-8.0, 8.0, 513)
    assert not ax.periodic
    assert ax.start == -8.0
    assert ax.last == pytest.approx(8.0)
    assert ax.count == 513
    assert ax.step == pytest.approx(16.0 / 512)


def test_period_requires_periodic_axis():
    ax = GridAxis.linspace(0.0, 1.0, 5)
    with pytest.raises(ValueError):
        _ = ax.period
