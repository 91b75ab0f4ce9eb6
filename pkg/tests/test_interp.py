import numpy as np
import pytest

from cyltomo.grid import GridAxis, TWO_PI
from cyltomo.interp import grid_eval_1d, grid_eval_2d, grid_eval_nd


def test_nodes_reproduced_exactly():
    ax = GridAxis.linspace(-2.0, 2.0, 9)
    vals = np.sin(ax.points())
    got = grid_eval_1d(vals, ax, ax.points())
    assert np.array_equal(got, vals) or np.allclose(got, vals, atol=1e-15)


def test_periodic_wrap_is_exact():
    ax = GridAxis.angle_axis(16)
    vals = np.cos(ax.points()) + 0.3 * np.sin(2 * ax.points())
    x = np.linspace(0, TWO_PI, 37)
    base = grid_eval_1d(vals, ax, x)
    for k in (-3, 1, 7):
        shifted = grid_eval_1d(vals, ax, x + TWO_PI * k)
        assert np.allclose(shifted, base, atol=1e-12)


def test_linear_and_cubic_functions_exact():
    # the 4-point rule reproduces polynomials up to degree 3, including at
    # the one-sided edge stencils
    ax = GridAxis.linspace(0.0, 3.0, 7)
    x = np.linspace(0.0, 3.0, 101)
    for coeffs in [(0.5, -2.0, 0.0, 0.0), (1.0, 0.25, -0.5, 0.125)]:
        f = lambda t: coeffs[0] + coeffs[1] * t + coeffs[2] * t**2 + coeffs[3] * t**3
        got = grid_eval_1d(f(ax.points()), ax, x)
        assert np.allclose(got, f(x), atol=1e-13)


def test_midpoint_of_linear_density_is_mean():
    ax = GridAxis.linspace(0.0, 1.0, 5)
    vals = 2.0 + 3.0 * ax.points()
    mid = 0.5 * (ax.points()[1] + ax.points()[2])
    assert grid_eval_1d(vals, ax, mid) == pytest.approx(
        0.5 * (vals[1] + vals[2]), abs=1e-14)


def test_outside_support_is_zero():
    ax = GridAxis.linspace(-1.0, 1.0, 9)
    vals = np.ones(9)
    got = grid_eval_1d(vals, ax, np.array([-1.5, 1.0001, 5.0]))
    assert np.all(got == 0.0)


def test_fourth_order_convergence():
    f = lambda t: np.exp(-0.5 * t * t)
    errs = []
    for n in (129, 257):
        ax = GridAxis.linspace(-6.0, 6.0, n)
        x = np.linspace(-2.5, 2.5, 1001)
        errs.append(np.max(np.abs(grid_eval_1d(f(ax.points()), ax, x) - f(x))))
    ratio = errs[0] / errs[1]
    assert 10.0 < ratio < 24.0  # h -> h/2 should shrink error ~16x


def test_2d_separable_matches_product():
    phi_ax = GridAxis.angle_axis(32)
    j_ax = GridAxis.linspace(-4.0, 4.0, 65)
    g1 = 1.0 + 0.5 * np.cos(phi_ax.points())
    g2 = np.exp(-0.5 * j_ax.points() ** 2)
    vals = g1[:, None] * g2[None, :]
    rng = np.random.default_rng(3)
    phi = rng.uniform(-10, 10, 40)
    j = rng.uniform(-3.5, 3.5, 40)
    got = grid_eval_2d(vals, phi_ax, j_ax, phi, j)
    want = grid_eval_1d(g1, phi_ax, phi) * grid_eval_1d(g2, j_ax, j)
    assert np.allclose(got, want, atol=1e-13)


def test_nd_matches_2d_on_product_grid():
    phi_ax = GridAxis.angle_axis(16)
    j_ax = GridAxis.linspace(-3.0, 3.0, 17)
    rng = np.random.default_rng(11)
    a = rng.uniform(0.5, 1.0, (16, 17))
    b = rng.uniform(0.5, 1.0, (16, 17))
    vals = np.einsum("ab,cd->abcd", a, b)
    pts = [rng.uniform(0, TWO_PI, 25), rng.uniform(-2.5, 2.5, 25),
           rng.uniform(0, TWO_PI, 25), rng.uniform(-2.5, 2.5, 25)]
    got = grid_eval_nd(vals, (phi_ax, j_ax, phi_ax, j_ax), pts)
    want = (grid_eval_2d(a, phi_ax, j_ax, pts[0], pts[1])
            * grid_eval_2d(b, phi_ax, j_ax, pts[2], pts[3]))
    assert np.allclose(got, want, atol=1e-12)
