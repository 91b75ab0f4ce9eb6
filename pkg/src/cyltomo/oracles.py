"""Closed-form tomograms of Gaussian densities.

Every formula here is derived independently of the quadrature code and
serves as a reference the numeric transforms are tested against.  Three
density families are covered:

* uniform-in-phi Gaussians  f(phi, J) = N(J; j0, sj) / (2 pi)
* wrapped Gaussians         f(phi, J) = WN(phi; phi0, sp) N(J; j0, sj)
* plane Gaussians           f(q, p)   = N(q; q0, sq) N(p; p0, sp)

where N is the normal pdf and WN the wrapped normal (sum of 2*pi images).
The strip formulas reduce window integrals of Gaussian products to erf
differences; the helix formulas are wrapped normals on a circle of
circumference 2*pi*|m|.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erf

from dataclasses import dataclass

from .grid import TWO_PI

__all__ = [
    "normal_pdf",
    "OracleResult",
    "oracle_strip_gaussian",
    "oracle_strip_wrapped",
    "oracle_helix_gaussian",
    "oracle_helix_wrapped",
    "oracle_m0_gaussian",
    "oracle_plane_gaussian",
    "oracle_char_plane",
    "oracle_char_circle",
    "run_oracle_suite",
]

_SQRT2 = math.sqrt(2.0)

FORMULA_TAGS = ("strip-erf", "m0-gauss", "helix-const", "plane-gauss")


@dataclass(frozen=True)
class OracleResult:
    """A reference value together with the closed form that produced it."""

    value: float
    formula_tag: str

    def __post_init__(self):
        if self.formula_tag not in FORMULA_TAGS:
            raise ValueError(f"unknown formula tag {self.formula_tag!r}")
        if not math.isfinite(self.value) or self.value < 0.0:
            raise ValueError(f"oracle values are finite and >= 0, got {self.value}")


def normal_pdf(x, mean=0.0, sigma=1.0):
    x = np.asarray(x, float)
    z = (x - mean) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def _gauss_window_integral(a, b, mean, sigma):
    """Integral of N(x; mean, sigma) over [a, b]."""
    return 0.5 * (erf((b - mean) / (_SQRT2 * sigma)) - erf((a - mean) / (_SQRT2 * sigma)))


def oracle_m0_gaussian(X, nu, j0=0.0, sigma_j=1.0):
    """Tomogram at m = 0 (shared by strip and helix): (1/|nu|) N(X/nu; j0, sj).

    The phi integral over one period contributes 1 for any normalized
    phi-marginal, so this holds for both density families.
    """
    if nu == 0.0:
        raise ValueError("m = 0 needs nu != 0")
    return normal_pdf(np.asarray(X, float) / nu, j0, sigma_j) / abs(nu)


def oracle_strip_gaussian(X, m, nu, alpha=0.0, j0=0.0, sigma_j=1.0):
    """Strip tomogram of the uniform-in-phi Gaussian over I_alpha.

    (1 / 4 pi |m|) times the erf-difference across the phi window: the
    delta support is the line phi = (X - nu J)/m, and integrating out J
    leaves a Gaussian in phi with center (X - nu j0)/m and width
    |nu| sj / |m|.  Defined for m != 0 and nu != 0; the m = 0 slice has
    its own closed form (oracle_m0_gaussian) and nu = 0 degenerates to an
    indicator handled by the transform itself.
    """
    if m == 0 or nu == 0.0:
        raise ValueError("strip erf oracle needs m != 0 and nu != 0")
    X = np.asarray(X, float)
    center = (X - nu * j0) / m
    width = abs(nu) * sigma_j / abs(m)
    win = _gauss_window_integral(alpha, alpha + TWO_PI, center, width)
    return np.abs(win) / (TWO_PI * abs(m))


def oracle_strip_wrapped(X, m, nu, alpha=0.0, phi0=math.pi, sigma_phi=0.7,
                         j0=0.0, sigma_j=1.0):
    """Strip tomogram of a wrapped Gaussian over I_alpha.

    Each 2*pi image of the phi Gaussian contributes a Gaussian-product
    window integral; the image sum is truncated once the coupling factor
    falls below double precision.
    """
    X = np.asarray(X, float)
    if m == 0:
        return oracle_m0_gaussian(X, nu, j0, sigma_j)
    if nu == 0.0:
        phi_hit = X / m
        inside = (phi_hit >= alpha) & (phi_hit < alpha + TWO_PI)
        lo = int(math.floor((float(np.min(phi_hit)) - phi0 - 8 * sigma_phi) / TWO_PI)) - 1
        hi = int(math.ceil((float(np.max(phi_hit)) - phi0 + 8 * sigma_phi) / TWO_PI)) + 1
        prof = np.zeros(np.shape(phi_hit))
        for k in range(lo, hi + 1):
            prof = prof + normal_pdf(phi_hit, phi0 + TWO_PI * k, sigma_phi)
        return np.where(inside, prof / abs(m), 0.0)
    center = (X - nu * j0) / m
    width = abs(nu) * sigma_j / abs(m)
    out = np.zeros(np.shape(X))
    c_mid = float(np.mean(center))
    s_tot = math.hypot(sigma_phi, float(width))
    reach = 8.0 * s_tot + 0.5 * float(np.ptp(center)) if np.ndim(X) else 8.0 * s_tot
    k_lo = int(math.floor((c_mid - phi0 - reach) / TWO_PI)) - 1
    k_hi = int(math.ceil((c_mid - phi0 + reach) / TWO_PI)) + 1
    inv_var = 1.0 / sigma_phi**2 + 1.0 / width**2
    s_star = math.sqrt(1.0 / inv_var)
    for k in range(k_lo, k_hi + 1):
        mu1 = phi0 + TWO_PI * k
        coupling = normal_pdf(center, mu1, s_tot)
        mu_star = (mu1 / sigma_phi**2 + center / width**2) / inv_var
        win = _gauss_window_integral(alpha, alpha + TWO_PI, mu_star, s_star)
        out = out + coupling * win
    return out / abs(m)


def oracle_helix_gaussian(m) -> float:
    """Helix tomogram of the uniform-in-phi Gaussian: 1 / (2 pi |m|).

    Constant regardless of X and nu.  The m = 0 slice is not constant; it
    coincides with oracle_m0_gaussian.
    """
    if m == 0:
        raise ValueError("helix constant oracle needs m != 0; use the m = 0 form")
    return 1.0 / (TWO_PI * abs(m))


def oracle_helix_wrapped(X, m, nu, phi0=math.pi, sigma_phi=0.7,
                         j0=0.0, sigma_j=1.0):
    """Helix tomogram of a wrapped Gaussian.

    For m != 0 the full-line J integral of the Gaussian product is again
    Gaussian, so the result is a wrapped normal on the circle of
    circumference 2*pi*|m|:

        sum_k N(X - 2 pi m k; m phi0 + nu j0, sqrt(m^2 sp^2 + nu^2 sj^2))
    """
    X = np.asarray(X, float)
    if m == 0:
        return oracle_m0_gaussian(X, nu, j0, sigma_j)
    mean = m * phi0 + nu * j0
    sigma = math.hypot(m * sigma_phi, nu * sigma_j)
    spacing = TWO_PI * abs(m)
    c_mid = float(np.mean(X))
    reach = 8.0 * sigma + (0.5 * float(np.ptp(X)) if np.ndim(X) else 0.0)
    k_lo = int(math.floor((c_mid - mean - reach) / spacing)) - 1
    k_hi = int(math.ceil((c_mid - mean + reach) / spacing)) + 1
    out = np.zeros(np.shape(X))
    for k in range(k_lo, k_hi + 1):
        out = out + normal_pdf(X, mean + spacing * k, sigma)
    return out


def oracle_plane_gaussian(X, mu, nu, q0=0.0, p0=0.0, sigma_q=1.0, sigma_p=1.0):
    """Plane tomogram of a Gaussian: N(X; mu q0 + nu p0, sqrt(mu^2 sq^2 + nu^2 sp^2))."""
    if mu == 0.0 and nu == 0.0:
        raise ValueError("(mu, nu) = (0, 0) is outside the tomogram domain")
    sigma = math.hypot(mu * sigma_q, nu * sigma_p)
    return normal_pdf(np.asarray(X, float), mu * q0 + nu * p0, sigma)


def oracle_char_plane(mu, nu, q0=0.0, p0=0.0, sigma_q=1.0, sigma_p=1.0):
    """Characteristic function E[exp(i(mu q + nu p))] of a plane Gaussian."""
    mu = np.asarray(mu, float)
    nu = np.asarray(nu, float)
    return np.exp(1j * (mu * q0 + nu * p0)
                  - 0.5 * ((mu * sigma_q) ** 2 + (nu * sigma_p) ** 2))


def oracle_char_circle(m, nu, phi0=math.pi, sigma_phi=0.7, j0=0.0, sigma_j=1.0,
                       uniform_phi=False):
    """E[exp(i(m phi + nu J))] of a cylinder Gaussian at integer m.

    For integer m the strip integral of the wrapped normal equals the
    full-line integral of one image, so the phi factor is
    exp(i m phi0 - m^2 sp^2 / 2); uniform phi keeps only m = 0.
    """
    m_arr = np.asarray(m)
    if not np.all(np.equal(np.mod(m_arr, 1), 0)):
        raise ValueError("m must be integer for circle characteristic values")
    nu = np.asarray(nu, float)
    j_factor = np.exp(1j * nu * j0 - 0.5 * (nu * sigma_j) ** 2)
    if uniform_phi:
        return np.where(m_arr == 0, j_factor, 0.0 * j_factor)
    return np.exp(1j * m_arr * phi0 - 0.5 * (m_arr * sigma_phi) ** 2) * j_factor


def run_oracle_suite(cfg=None, include_plane=True):
    """Compare numeric tomograms against every closed form on a fixed panel.

    Returns a list of result rows (dicts with family, point, numeric value,
    reference value, and absolute error).  Imports the transform modules
    lazily so this module stays dependency-light.
    """
    from .config import DEFAULT_CONFIG
    from .densities import make_uniform_phi_gaussian, make_wrapped_gaussian, \
        make_plane_gaussian
    from .circle import strip_tomogram, helix_tomogram
    from .plane import plane_tomogram

    cfg = cfg or DEFAULT_CONFIG
    rows = []

    def add(family, tag, point, got, want):
        got = float(np.asarray(got).reshape(()))
        want = float(np.asarray(want).reshape(()))
        rows.append({"family": family, "formulaTag": tag, "point": point,
                     "numeric": got, "reference": want,
                     "absError": abs(got - want)})

    exf = make_uniform_phi_gaussian(cfg=cfg)
    strip_pts = [(0.7, 1, 0.8, 0.0), (-1.3, 2, 1.5, 0.0), (2.0, -1, 0.5, 0.0),
                 (4.0, 3, -2.0, 1.0), (0.0, 1, 1.0, 0.0), (3.1415, 1, 1.0, 0.0)]
    for X, m, nu, alpha in strip_pts:
        got = strip_tomogram(exf, X, m, nu, alpha=alpha, cfg=cfg)
        add("strip-uniform", "strip-erf", (X, m, nu, alpha), got,
            oracle_strip_gaussian(X, m, nu, alpha))
    for X, nu in [(0.6, 1.2), (-0.4, -0.7), (0.0, 2.0)]:
        got = strip_tomogram(exf, X, 0, nu, alpha=0.0, cfg=cfg)
        add("strip-uniform", "m0-gauss", (X, 0, nu, 0.0), got,
            oracle_m0_gaussian(X, nu))
    for X, m, nu in [(0.3, 1, 1.0), (0.7, 1, 3.2), (5.0, 2, -1.5),
                     (-2.0, -1, 0.5), (7.0, 3, 2.0)]:
        got = helix_tomogram(exf, X, m, nu, cfg=cfg)
        add("helix-uniform", "helix-const", (X, m, nu), got,
            oracle_helix_gaussian(m))
    got = helix_tomogram(exf, 0.9, 0, 1.4, cfg=cfg)
    add("helix-uniform", "m0-gauss", (0.9, 0, 1.4), got,
        oracle_m0_gaussian(0.9, 1.4))

    wrapped = make_wrapped_gaussian(cfg=cfg)
    for X, m, nu, alpha in [(2.8, 1, 1.0, 0.0), (-0.5, 2, 0.6, 0.0),
                            (6.0, -1, 1.5, 0.5), (3.0, 1, 0.8, 1.0)]:
        got = strip_tomogram(wrapped, X, m, nu, alpha=alpha, cfg=cfg)
        add("strip-wrapped", "strip-wrapped", (X, m, nu, alpha), got,
            oracle_strip_wrapped(X, m, nu, alpha))
    for X, m, nu in [(3.1, 1, 1.0), (0.0, 2, -0.8), (-4.0, -1, 1.2)]:
        got = helix_tomogram(wrapped, X, m, nu, cfg=cfg)
        add("helix-wrapped", "helix-wrapped", (X, m, nu), got,
            oracle_helix_wrapped(X, m, nu))

    if include_plane:
        plane = make_plane_gaussian(cfg=cfg)
        for X, mu, nu in [(0.0, 1.0, 0.0), (1.0, 0.6, 0.8), (-2.0, 1.5, -0.5),
                          (0.5, 0.0, 1.0), (2.0, 2.0, 0.0)]:
            got = plane_tomogram(plane, X, mu, nu, cfg=cfg)
            add("plane-gaussian", "plane-gauss", (X, mu, nu), got,
                oracle_plane_gaussian(X, mu, nu))
    return rows
