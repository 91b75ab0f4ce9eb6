import math
import warnings

import numpy as np
import pytest

from cyltomo import plane
from cyltomo.config import AccuracyWarning, DEFAULT_CONFIG
from cyltomo.densities import make_plane_gaussian
from cyltomo.oracles import oracle_plane_gaussian

INV_2PI = 1.0 / (2.0 * math.pi)


@pytest.fixture(scope="module")
def gauss():
    return make_plane_gaussian()


@pytest.fixture(scope="module")
def offset_gauss():
    # 7 sigma from the p-grid edge: the constructor notes the 3e-10 boundary
    # value, which is irrelevant at this module's tolerances
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        return make_plane_gaussian(q0=0.6, p0=-0.4, sigma_q=0.8, sigma_p=1.2)


@pytest.fixture(scope="module")
def gauss_radon(gauss):
    return plane.radon_table(gauss)


@pytest.fixture(scope="module")
def cartesian_roundtrip(gauss):
    """Default-config Fourier inversion of the numerically forward-transformed
    standard Gaussian, evaluated on the central box plus a far tail point."""
    qs = np.linspace(-2.0, 2.0, 9)
    Q, P = np.meshgrid(qs, qs, indexing="ij")
    targets_q = np.concatenate([Q.ravel(), [8.0, 0.0]])
    targets_p = np.concatenate([P.ravel(), [8.0, 0.0]])
    sampler = plane.PlaneSliceSampler(gauss)
    with warnings.catch_warnings():
        warnings.simplefilter("error", AccuracyWarning)
        values = plane.plane_inverse(sampler, targets_q, targets_p)
    exact = np.exp(-0.5 * (targets_q ** 2 + targets_p ** 2)) * INV_2PI
    return targets_q, targets_p, values, exact


def test_frame_examples():
    pm = plane.frame_to_mu_nu(plane.FrameParams(1.0, 0.0))
    assert (pm.mu, pm.nu) == (1.0, 0.0)
    pm = plane.frame_to_mu_nu(plane.FrameParams(1.0, math.pi / 2))
    assert pm.mu == pytest.approx(0.0, abs=1e-15)
    assert pm.nu == pytest.approx(1.0, rel=1e-15)
    pm = plane.frame_to_mu_nu(plane.FrameParams(2.0, math.pi / 2))
    assert pm.mu == pytest.approx(0.0, abs=1e-15)
    assert pm.nu == pytest.approx(0.5, rel=1e-15)


def test_frame_validation():
    with pytest.raises(ValueError):
        plane.FrameParams(0.0, 1.0)
    with pytest.raises(ValueError):
        plane.FrameParams(-2.0, 0.3)


def test_params_reject_degenerate_direction():
    with pytest.raises(ValueError):
        plane.PlaneTomogramParams(0.0, 0.0)


def test_forward_frozen_values(gauss):
    assert plane.plane_tomogram(gauss, 0.0, 1.0, 0.0) == pytest.approx(
        1.0 / math.sqrt(2.0 * math.pi), abs=1e-7)
    assert plane.plane_tomogram(gauss, 1.0, 0.0, 1.0) == pytest.approx(
        math.exp(-0.5) / math.sqrt(2.0 * math.pi), abs=1e-7)
    # scaling (1, 1, 0) by 2: same line, half the density
    assert plane.plane_tomogram(gauss, 2.0, 2.0, 0.0) == pytest.approx(
        0.1209854, abs=1e-7)


def test_forward_matches_closed_form(gauss):
    rng = np.random.default_rng(5)
    checked = 0
    for _ in range(150):
        mu = rng.uniform(-6.0, 6.0)
        nu = rng.uniform(-6.0, 6.0)
        s = math.hypot(mu, nu)
        if s < 0.05:
            continue
        X = rng.uniform(-3.0 * s, 3.0 * s)
        got = plane.plane_tomogram(gauss, X, mu, nu)
        assert got == pytest.approx(oracle_plane_gaussian(X, mu, nu), abs=2e-7)
        checked += 1
    assert checked > 140


def test_forward_offset_anisotropic(offset_gauss):
    rng = np.random.default_rng(17)
    directions = [(6.0, 0.1), (0.1, 6.0), (-5.0, 0.0), (0.0, -5.0)]
    directions += [tuple(rng.uniform(-4, 4, size=2)) for _ in range(40)]
    for mu, nu in directions:
        s = math.hypot(mu, nu)
        if s < 0.05:
            continue
        X = rng.uniform(-2.5 * s, 2.5 * s)
        got = plane.plane_tomogram(offset_gauss, X, mu, nu)
        want = oracle_plane_gaussian(X, mu, nu, q0=0.6, p0=-0.4,
                                     sigma_q=0.8, sigma_p=1.2)
        assert got == pytest.approx(want, abs=3e-7)


def test_forward_degenerate_raises(gauss):
    with pytest.raises(ValueError):
        plane.plane_tomogram(gauss, 0.3, 0.0, 0.0)


def test_forward_vectorized_matches_scalar(gauss):
    X = np.array([-2.0, -0.3, 0.0, 1.1, 4.0])
    batch = plane.plane_tomogram(gauss, X, 0.8, -1.7)
    for k, x in enumerate(X):
        assert batch[k] == plane.plane_tomogram(gauss, float(x), 0.8, -1.7)


def test_homogeneity_is_exact_for_binary_scalings(gauss):
    # windows, nodes and weights coincide bit for bit under lambda in the
    # powers of two, so the identity holds to rounding of the final divide
    rng = np.random.default_rng(23)
    for _ in range(20):
        mu = rng.uniform(-3, 3)
        nu = rng.uniform(-3, 3)
        if math.hypot(mu, nu) < 0.1:
            continue
        X = rng.uniform(-4, 4)
        base = plane.plane_tomogram(gauss, X, mu, nu)
        for lam in (2.0, -2.0, 0.5, -0.5):
            scaled = plane.plane_tomogram(gauss, lam * X, lam * mu, lam * nu)
            assert scaled == pytest.approx(base / abs(lam), rel=1e-14)


def test_slice_normalization_and_sign(gauss):
    for mu, nu in [(1.0, 0.0), (0.3, -1.2), (4.0, 4.0), (6.0, 0.1), (0.0, 2.5)]:
        span = 8.0 * (abs(mu) + abs(nu)) + 2.0
        X = np.linspace(-span, span, 2001)
        vals = plane.plane_tomogram(gauss, X, mu, nu)
        assert vals.min() >= -1e-12
        assert np.trapezoid(vals, X) == pytest.approx(1.0, abs=2e-8)


def test_radon_line_frozen_values(gauss):
    assert plane.radon_line_integral(gauss, 0.0, 1.1) == pytest.approx(
        1.0 / math.sqrt(2.0 * math.pi), abs=1e-7)
    assert plane.radon_line_integral(gauss, 1.0, 0.7) == pytest.approx(
        math.exp(-0.5) / math.sqrt(2.0 * math.pi), abs=1e-7)


def test_radon_line_angle_periodic(gauss):
    for d, th in [(0.4, 0.0), (-1.1, 2.2), (0.0, 5.0)]:
        a = plane.radon_line_integral(gauss, d, th)
        b = plane.radon_line_integral(gauss, d, th + 2.0 * math.pi)
        assert b == pytest.approx(a, rel=1e-10, abs=1e-12)


def test_radon_line_matches_affine_form(gauss):
    for th in (0.0, 0.3, math.pi / 2, 2.2, 5.9):
        for d in (-1.2, 0.8):
            line = plane.radon_line_integral(gauss, d, th)
            affine = plane.plane_tomogram(gauss, d, math.cos(th), math.sin(th))
            assert line == pytest.approx(affine, abs=1e-8)


def test_radon_table_shape_and_tangent_average(gauss, gauss_radon):
    tab = gauss_radon
    assert tab.values.shape == (tab.d_axis.count, tab.theta_axis.count)
    # at the origin every tangent line to radius r sits at distance r, so
    # the angular average reduces to a single profile
    r = np.linspace(0.0, 4.0, 7)
    fp = plane.tangent_circle_average(tab, 0.0, 0.0, r)
    direct = np.array([plane.radon_line_integral(gauss, rr, 0.0) for rr in r])
    assert np.abs(fp - direct).max() < 1e-6


def test_classical_inverse_recovers_gaussian(gauss_radon):
    errs = []
    for q in (-1.0, 0.0, 1.0):
        for p in (-1.0, 0.0, 1.0):
            got = plane.radon_classical_inverse(gauss_radon, q, p)
            exact = math.exp(-0.5 * (q * q + p * p)) * INV_2PI
            errs.append(abs(got - exact))
    assert max(errs) <= 5e-2
    assert max(errs) < 5e-3  # regression guard well inside the gate


def test_classical_inverse_zero_table(gauss_radon):
    zero = plane.RadonTable(gauss_radon.d_axis, gauss_radon.theta_axis,
                            np.zeros_like(gauss_radon.values))
    assert plane.radon_classical_inverse(zero, 0.3, -0.2) == 0.0


def test_classical_inverse_cutoff_validation(gauss_radon):
    with pytest.raises(ValueError):
        plane.radon_classical_inverse(gauss_radon, 0.0, 0.0,
                                      DEFAULT_CONFIG.replace(reg_epsilon=9.0))
    with pytest.raises(ValueError):
        DEFAULT_CONFIG.replace(reg_epsilon=-1.0)


def test_sampler_adapter_matches_forward(gauss):
    sampler = plane.PlaneSliceSampler(gauss)
    assert sampler.geometry == "plane"
    assert sampler.reflection_symmetric
    assert sampler.total_mass == pytest.approx(1.0, abs=1e-8)
    X = np.linspace(-3.0, 3.0, 7)
    assert np.array_equal(sampler(X, 0.7, -0.2),
                          plane.plane_tomogram(gauss, X, 0.7, -0.2))


def test_fourier_inverse_roundtrip_central_box(cartesian_roundtrip):
    _, _, values, exact = cartesian_roundtrip
    central = np.abs(values[:-2] - exact[:-2]).max()
    assert central <= 1e-2
    assert central < 2e-3  # regression guard well inside the gate


def test_fourier_inverse_far_point_vanishes(cartesian_roundtrip):
    assert abs(cartesian_roundtrip[2][-2]) < 1e-3


def test_fourier_inverse_origin_value(cartesian_roundtrip):
    assert cartesian_roundtrip[2][-1] == pytest.approx(INV_2PI, abs=1e-2)


def test_polar_mode_agrees_with_cartesian(gauss, cartesian_roundtrip):
    sampler = plane.PlaneSliceSampler(gauss)
    polar = plane.plane_inverse(sampler, 0.0, 0.0, mode="polar")
    cartesian = cartesian_roundtrip[2][-1]
    assert abs(polar - cartesian) <= 2e-2
    assert polar == pytest.approx(INV_2PI, abs=1e-3)


def test_inverse_unknown_mode(gauss):
    with pytest.raises(ValueError):
        plane.plane_inverse(plane.PlaneSliceSampler(gauss), 0.0, 0.0,
                            mode="spherical")


def test_bare_sampler_center_fill_warns():
    small = DEFAULT_CONFIG.replace(mu_grid_points=41, x_grid_points=161)

    def bare(X, mu, nu):
        return oracle_plane_gaussian(X, mu, nu)

    with pytest.warns(AccuracyWarning, match="degenerate"):
        val = plane.plane_inverse(bare, 0.0, 0.0, small)
    assert val == pytest.approx(INV_2PI, abs=5e-3)


def test_narrow_x_box_flags_undersampling(gauss):
    narrow = DEFAULT_CONFIG.replace(x_half_width=3.0, mu_grid_points=21,
                                    x_grid_points=61)
    sampler = plane.PlaneSliceSampler(gauss, narrow)
    with pytest.warns(AccuracyWarning, match="integrate"):
        plane.plane_inverse(sampler, 0.0, 0.0, narrow)
