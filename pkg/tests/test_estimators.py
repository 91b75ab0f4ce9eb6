import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cyltomo import DEFAULT_CONFIG
from cyltomo.circle import (
    DensityStripSampler,
    circle_inverse_strip,
    helix_tomogram,
    strip_tomogram,
)
from cyltomo.densities import (
    TorusDensity,
    default_cylinder_axes,
    default_plane_axes,
    make_plane_gaussian,
    make_uniform_phi_gaussian,
    make_wrapped_gaussian,
)
from cyltomo.estimators import (
    CylinderTomography,
    PlaneTomography,
    TorusTomography,
)
from cyltomo.plane import PlaneSliceSampler, plane_inverse, plane_tomogram
from cyltomo.torus import TorusTomogramParams, torus_inverse, torus_tomogram

COARSE = default_cylinder_axes(48, 97)
SMALL_CFG = DEFAULT_CONFIG.replace(mode_truncation=6, nu_grid_points=41,
                                   x_grid_points=61, mu_grid_points=21)


@pytest.fixture(scope="module")
def plane_g():
    return make_plane_gaussian(axes=default_plane_axes(129, 8.0))


@pytest.fixture(scope="module")
def exf():
    return make_uniform_phi_gaussian(axes=COARSE)


@pytest.fixture(scope="module")
def wrapped():
    return make_wrapped_gaussian(0.9, 0.7, 0.0, 1.0, axes=COARSE)


def test_plane_estimator_params_and_clone():
    est = PlaneTomography(cfg=SMALL_CFG, inverse_mode="polar")
    params = est.get_params()
    assert params["inverse_mode"] == "polar"
    assert params["cfg"] == SMALL_CFG
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(inverse_mode="cartesian")
    assert est.inverse_mode == "cartesian"


def test_plane_estimator_transform(plane_g):
    est = PlaneTomography().fit(plane_g)
    rows = np.array([[0.0, 1.0, 0.0],
                     [1.0, 0.0, 1.0],
                     [0.5, 1.0, 0.0],
                     [-0.3, 0.6, 0.8]])
    got = est.transform(rows)
    want = [plane_tomogram(plane_g, X, mu, nu) for X, mu, nu in rows]
    np.testing.assert_allclose(got, want, rtol=1e-14)
    np.testing.assert_allclose(est.predict(rows), got, rtol=0)


def test_plane_estimator_inverse_matches_direct(plane_g):
    est = PlaneTomography(cfg=SMALL_CFG).fit(plane_g)
    Q = np.array([[0.0, 0.0], [0.5, -0.5]])
    got = est.inverse_transform(Q)
    sampler = PlaneSliceSampler(plane_g, SMALL_CFG)
    want = plane_inverse(sampler, Q[:, 0], Q[:, 1], SMALL_CFG)
    assert np.array_equal(got, np.asarray(want))


def test_plane_estimator_validation(plane_g):
    est = PlaneTomography()
    with pytest.raises(NotFittedError):
        est.transform([[0.0, 1.0, 0.0]])
    with pytest.raises(TypeError, match="PlaneDensity"):
        est.fit(np.zeros((4, 4)))
    est.fit(plane_g)
    with pytest.raises(ValueError, match="3 columns"):
        est.transform([[0.0, 1.0]])
    with pytest.raises(ValueError):
        est.transform([[np.nan, 1.0, 0.0]])


def test_cylinder_estimator_strip_and_helix(wrapped):
    rows = np.array([[0.3, 1.0, 0.8],
                     [1.1, 1.0, 0.8],
                     [-0.4, 2.0, -1.2],
                     [0.0, 0.0, 1.5]])
    strip = CylinderTomography(variant="strip", alpha=0.5).fit(wrapped)
    want = [strip_tomogram(wrapped, X, int(m), nu, 0.5)
            for X, m, nu in rows]
    np.testing.assert_allclose(strip.transform(rows), want, rtol=1e-14)

    helix = CylinderTomography(variant="helix").fit(wrapped)
    want = [helix_tomogram(wrapped, X, int(m), nu) for X, m, nu in rows]
    np.testing.assert_allclose(helix.transform(rows), want, rtol=1e-14)


def test_cylinder_estimator_validation(wrapped):
    with pytest.raises(ValueError, match="variant"):
        CylinderTomography(variant="spiral").fit(wrapped)
    with pytest.raises(TypeError, match="CylinderDensity"):
        CylinderTomography().fit(np.zeros((4, 4)))
    est = CylinderTomography().fit(wrapped)
    with pytest.raises(ValueError, match="m column"):
        est.transform([[0.0, 1.5, 1.0]])
    with pytest.raises(NotFittedError):
        CylinderTomography().transform([[0.0, 1.0, 1.0]])


def test_cylinder_estimator_inverse_matches_direct(wrapped):
    est = CylinderTomography(variant="strip", alpha=0.0, cfg=SMALL_CFG)
    got = est.fit(wrapped).inverse_transform([[0.9, 0.0], [2.0, 0.7]])
    sampler = DensityStripSampler(wrapped, 0.0, SMALL_CFG)
    want = circle_inverse_strip(sampler, np.array([0.9, 2.0]),
                                np.array([0.0, 0.7]), SMALL_CFG)
    assert np.array_equal(got, np.asarray(want))
    # the small mode cut already lands near the density on this smooth case
    np.testing.assert_allclose(got, wrapped.eval(np.array([0.9, 2.0]),
                                                 np.array([0.0, 0.7])),
                               atol=2e-3)


def test_torus_estimator_round_trip(exf, wrapped):
    density = TorusDensity(factors=(exf, wrapped))
    est = TorusTomography(m=(1, 2), nu=(1.0, 0.8), alpha=(0.0, 0.5),
                          cfg=SMALL_CFG).fit(density)
    P = np.array([[0.0, 0.0], [0.7, -0.3]])
    params = TorusTomogramParams((1, 2), (1.0, 0.8), (0.0, 0.5))
    want = [torus_tomogram(density, row, params, SMALL_CFG) for row in P]
    np.testing.assert_allclose(est.transform(P), want, rtol=1e-14)

    Q = np.array([[0.9, 0.0, 2.0, 0.5]])
    got = est.inverse_transform(Q)
    samplers = [DensityStripSampler(exf, 0.0, SMALL_CFG),
                DensityStripSampler(wrapped, 0.5, SMALL_CFG)]
    want = torus_inverse(samplers, [Q[:, 0], Q[:, 2]], [Q[:, 1], Q[:, 3]],
                         SMALL_CFG)
    np.testing.assert_allclose(got, np.asarray(want), rtol=1e-12)


def test_torus_estimator_validation(exf, wrapped):
    density = TorusDensity(factors=(exf, wrapped))
    with pytest.raises(ValueError, match="components"):
        TorusTomography(m=(1,), nu=(1.0,)).fit(density)
    with pytest.raises(ValueError, match="integer"):
        TorusTomography(m=(1.5, 1), nu=(1.0, 1.0)).fit(density)
    est = TorusTomography(m=(1, 1), nu=(1.0, 1.0)).fit(density)
    with pytest.raises(ValueError, match="2 columns"):
        est.transform([[0.0, 0.0, 0.0]])
    dense = TorusDensity(factors=(exf,)).materialized()
    est1 = TorusTomography(m=(1,), nu=(1.0,)).fit(dense)
    with pytest.raises(ValueError, match="product-form"):
        est1.inverse_transform([[0.0, 0.0]])
