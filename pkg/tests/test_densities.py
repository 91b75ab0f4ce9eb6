import math

import numpy as np
import pytest

from cyltomo.config import AccuracyWarning, DEFAULT_CONFIG
from cyltomo.densities import (
    CylinderDensity,
    PlaneDensity,
    TorusDensity,
    default_cylinder_axes,
    default_plane_axes,
    eval_density,
    make_plane_gaussian,
    make_uniform_phi_gaussian,
    make_wrapped_gaussian,
    make_wrapped_mixture,
    periodic_extension_eval,
    total_mass,
)
from cyltomo.grid import GridAxis, TWO_PI

PEAK = 0.06349363593424097          # (2 pi)^{-3/2}
PEAK_J1 = 0.038510836890748943      # (2 pi)^{-3/2} e^{-1/2}


def test_uniform_phi_gaussian_matches_formula_at_nodes():
    d = make_uniform_phi_gaussian(1.0)
    phi = d.phi_axis.points()
    j = d.j_axis.points()
    want = np.exp(-0.5 * j**2)[None, :] * PEAK
    assert np.max(np.abs(d.values - want)) < 1e-12 * PEAK
    assert d.eval(0.123, 0.0) == pytest.approx(PEAK, abs=1e-12)
    assert d.eval(5.0, 1.0) == pytest.approx(PEAK_J1, abs=1e-10)


def test_uniform_phi_gaussian_mass():
    d = make_uniform_phi_gaussian(1.0)
    assert abs(total_mass(d) - 1.0) <= DEFAULT_CONFIG.mass_tol


def test_mass_linearity_and_zero():
    d = make_uniform_phi_gaussian(1.0)
    doubled = CylinderDensity(d.phi_axis, d.j_axis, 2.0 * d.values)
    assert total_mass(doubled) == pytest.approx(2.0, abs=2 * DEFAULT_CONFIG.mass_tol)
    zero = CylinderDensity(d.phi_axis, d.j_axis, np.zeros_like(d.values))
    assert total_mass(zero) == 0.0


def test_sigma_validation():
    with pytest.raises(ValueError):
        make_uniform_phi_gaussian(0.0)
    with pytest.raises(ValueError):
        make_wrapped_gaussian(sigma_phi=-1.0)


def test_narrow_j_axis_warns():
    axes = default_cylinder_axes(j_points=129, j_halfwidth=4.0)
    with pytest.warns(AccuracyWarning):
        make_uniform_phi_gaussian(1.0, axes=axes)


def test_wrapped_gaussian_mass_and_periodicity():
    d = make_wrapped_gaussian(phi0=2.0, sigma_phi=0.7, j0=0.3, sigma_j=1.1)
    assert abs(total_mass(d) - 1.0) <= DEFAULT_CONFIG.mass_tol
    phi = np.linspace(-5, 15, 50)
    assert np.allclose(d.eval(phi, 0.3), d.eval(phi + TWO_PI, 0.3), atol=1e-13)
    assert np.allclose(d.eval(phi, 0.3), d.eval(phi - 3 * TWO_PI, 0.3), atol=1e-13)


def test_wide_wrapped_gaussian_flattens_to_uniform():
    d = make_wrapped_gaussian(phi0=1.0, sigma_phi=10.0, j0=0.0, sigma_j=1.0)
    row = d.values[:, d.j_axis.count // 2]
    assert row.max() - row.min() < 1e-6 * row.max()


def test_wrapped_mixture_mass_and_nonneg():
    d = make_wrapped_mixture([
        (0.6, 1.0, 0.5, -0.5, 0.8),
        (0.4, 4.0, 1.2, 0.6, 1.0),
    ])
    assert abs(total_mass(d) - 1.0) <= DEFAULT_CONFIG.mass_tol
    assert d.values.min() >= 0.0


def test_plane_gaussian_mass_and_values():
    d = make_plane_gaussian()
    assert abs(total_mass(d) - 1.0) <= DEFAULT_CONFIG.mass_tol
    assert d.eval(0.0, 0.0) == pytest.approx(1.0 / TWO_PI, abs=1e-10)
    assert d.eval(12.0, 0.0) == 0.0  # beyond the grid


def test_negative_values_rejected():
    phi_ax, j_ax = default_cylinder_axes()
    bad = -np.ones((phi_ax.count, j_ax.count))
    with pytest.raises(ValueError):
        CylinderDensity(phi_ax, j_ax, bad)


def test_asymmetric_j_axis_rejected():
    phi_ax = GridAxis.angle_axis(8)
    j_ax = GridAxis.linspace(-2.0, 6.0, 9)
    with pytest.raises(ValueError):
        CylinderDensity(phi_ax, j_ax, np.zeros((8, 9)))


def test_periodic_extension_matches_on_strip_and_beyond():
    d = make_wrapped_gaussian()
    phi = d.phi_axis.points()
    j = d.j_axis.points()[256]
    inside = periodic_extension_eval(d, phi, j)
    assert np.allclose(inside, d.values[:, 256], atol=1e-14)
    # q = 5*pi lands at phi = pi after reduction
    exf = make_uniform_phi_gaussian(1.0)
    assert periodic_extension_eval(exf, 5 * math.pi, 0.0) == pytest.approx(PEAK, abs=1e-12)


def test_eval_density_dispatch_and_node_exactness():
    d = make_wrapped_gaussian()
    i, k = 37, 100
    phi_i = d.phi_axis.points()[i]
    j_k = d.j_axis.points()[k]
    assert eval_density(d, phi_i, j_k) == pytest.approx(d.values[i, k], abs=1e-15)


def test_translated_shifts_phi():
    d = make_wrapped_gaussian(phi0=2.0, sigma_phi=0.8)
    t = d.translated(1.0)
    phi = np.linspace(0, TWO_PI, 33)
    assert np.allclose(t.eval(phi, 0.0), d.eval(phi + 1.0, 0.0), atol=1e-9)


def test_torus_product_evaluation_and_mass():
    f1 = make_uniform_phi_gaussian(1.0)
    f2 = make_wrapped_gaussian()
    torus = TorusDensity(factors=(f1, f2))
    assert torus.n_components == 2
    assert abs(torus.mass() - 1.0) <= 2 * DEFAULT_CONFIG.mass_tol
    v = torus.eval(0.5, 0.0, 3.0, 1.0)
    assert v == pytest.approx(f1.eval(0.5, 0.0) * f2.eval(3.0, 1.0), abs=1e-14)


def test_torus_materialized_matches_product():
    ax = default_cylinder_axes(phi_points=32, j_points=33, j_halfwidth=6.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        f1 = make_uniform_phi_gaussian(0.8, axes=ax)
        f2 = make_wrapped_gaussian(axes=ax)
    prod = TorusDensity(factors=(f1, f2))
    full = prod.materialized()
    rng = np.random.default_rng(5)
    pts = [rng.uniform(0, TWO_PI, 20), rng.uniform(-5, 5, 20),
           rng.uniform(0, TWO_PI, 20), rng.uniform(-5, 5, 20)]
    assert np.allclose(full.eval(*pts), prod.eval(*pts), atol=1e-12)
    assert abs(full.mass() - prod.mass()) < 1e-12


def test_torus_three_factors_require_product_form():
    f = make_uniform_phi_gaussian(1.0)
    t3 = TorusDensity(factors=(f, f, f))
    with pytest.raises(ValueError):
        t3.materialized()


def test_default_axes_shapes():
    phi_ax, j_ax = default_cylinder_axes()
    assert (phi_ax.count, j_ax.count) == (256, 513)
    assert j_ax.start == -8.0 and j_ax.last == pytest.approx(8.0)
    q_ax, p_ax = default_plane_axes()
    assert (q_ax.count, p_ax.count) == (513, 513)
