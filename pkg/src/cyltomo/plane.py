"""Tomography on the phase-space plane.

The forward transform integrates a density over the line X = mu*q + nu*p.
It is computed by delta reduction: the line is parametrized by whichever
coordinate carries the larger coefficient, turning the 2-D delta integral
into a well-resolved 1-D quadrature clipped to the density's grid support.

Two inverses are provided.  plane_inverse discretizes the triple Fourier
integral f(q,p) = Re (2pi)^-2 int omega(X,mu,nu) e^{i(X - mu q - nu p)};
its optional polar mode rewrites the same integral over unit-circle
directions with the radial kernel int_0^rmax r e^{-eta r^2} e^{iru} dr.
radon_classical_inverse implements the tangent-circle route: average the
line integrals over all tangents to circles around the target point,
differentiate in the radius, and integrate -F'(r)/(pi r) above a small
cutoff.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import AccuracyWarning, DEFAULT_CONFIG, QuadratureConfig
from .densities import PlaneDensity
from .grid import GridAxis, TWO_PI
from .interp import axis_stencil

__all__ = [
    "PlaneTomogramParams",
    "FrameParams",
    "frame_to_mu_nu",
    "plane_tomogram",
    "radon_line_integral",
    "RadonTable",
    "radon_table",
    "tangent_circle_average",
    "radon_classical_inverse",
    "plane_inverse",
    "PlaneSliceSampler",
]


@dataclass(frozen=True)
class PlaneTomogramParams:
    """Affine line-family labels (mu, nu); the line is X = mu q + nu p."""

    mu: float
    nu: float

    def __post_init__(self):
        if self.mu == 0.0 and self.nu == 0.0:
            raise ValueError("(mu, nu) = (0, 0) does not define a line family")


@dataclass(frozen=True)
class FrameParams:
    """Squeeze-rotate frame: squeezing s > 0 and rotation angle theta."""

    s: float
    theta: float

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"squeezing must be positive, got {self.s}")


def frame_to_mu_nu(frame: FrameParams) -> PlaneTomogramParams:
    """mu = s cos(theta), nu = sin(theta)/s."""
    return PlaneTomogramParams(frame.s * math.cos(frame.theta),
                               math.sin(frame.theta) / frame.s)


def _as_batch(X):
    arr = np.atleast_1d(np.asarray(X, dtype=float))
    return arr, np.ndim(X) == 0


def _window_values(f: PlaneDensity, lo, hi, coef_t, coef_o, X, t_is_q,
                   scale, cfg: QuadratureConfig):
    """Trapezoid of f along t over per-X windows [lo, hi].

    The integration coordinate t runs along one grid axis; the other
    coordinate is (X - coef_t * t) / coef_o.  Windows may be empty.
    """
    width = np.maximum(hi - lo, 0.0)
    longest = width.max()
    out = np.zeros(X.shape)
    live = width > 0.0
    if longest == 0.0:
        return out
    n = int(np.clip(math.ceil(longest * cfg.line_points_per_scale / scale) + 1,
                    9, cfg.line_quad_points))
    frac = np.linspace(0.0, 1.0, n)
    t = lo[live, None] + width[live, None] * frac[None, :]
    other = (X[live, None] - coef_t * t) / coef_o
    g = f.eval(t, other) if t_is_q else f.eval(other, t)
    out[live] = np.trapezoid(g, x=t, axis=-1)
    return out


def _reduced_slice(f: PlaneDensity, X, coef_t, coef_o, axis_t: GridAxis,
                   axis_o: GridAxis, t_is_q, scale_t, scale_o,
                   cfg: QuadratureConfig):
    # |coef_o| >= |coef_t| by the caller's form choice, so coef_o != 0
    lo = np.full(X.shape, axis_t.start)
    hi = np.full(X.shape, axis_t.last)
    if coef_t != 0.0:
        e1 = (X - coef_o * axis_o.start) / coef_t
        e2 = (X - coef_o * axis_o.last) / coef_t
        lo = np.maximum(lo, np.minimum(e1, e2))
        hi = np.minimum(hi, np.maximum(e1, e2))
    else:
        other = X / coef_o
        feasible = (other >= axis_o.start) & (other <= axis_o.last)
        hi = np.where(feasible, hi, lo - 1.0)
    scale = scale_t
    if coef_t != 0.0:
        scale = min(scale, scale_o * abs(coef_o / coef_t))
    vals = _window_values(f, lo, hi, coef_t, coef_o, X, t_is_q, scale, cfg)
    return vals / abs(coef_o)


def plane_tomogram(f: PlaneDensity, X, mu: float, nu: float,
                   cfg: QuadratureConfig = DEFAULT_CONFIG):
    """omega_f(X, mu, nu) = int f(q, p) delta(X - mu q - nu p) dq dp.

    For |nu| >= |mu| the q parametrization (1/|nu|) int f(q, (X - mu q)/nu) dq
    is used, otherwise the p parametrization; both are exact reductions and
    the choice keeps the integrand resolved near the coordinate axes.
    """
    mu = float(mu)
    nu = float(nu)
    if mu == 0.0 and nu == 0.0:
        raise ValueError("(mu, nu) = (0, 0) does not define a line family")
    Xa, scalar = _as_batch(X)
    sq, sp = f.scale_hints
    if abs(nu) >= abs(mu):
        vals = _reduced_slice(f, Xa, mu, nu, f.q_axis, f.p_axis, True, sq, sp, cfg)
    else:
        vals = _reduced_slice(f, Xa, nu, mu, f.p_axis, f.q_axis, False, sp, sq, cfg)
    return float(vals[0]) if scalar else vals


def radon_line_integral(f: PlaneDensity, d, theta: float,
                        cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Integral of f along the line at signed distance d, normal angle theta.

    The line is (q, p) = (s cos(theta) - d sin(theta), s sin(theta) + d cos(theta))
    and the integral runs over the arclength parameter s, truncated to the
    grid support.
    """
    c = math.cos(theta)
    sn = math.sin(theta)
    da, scalar = _as_batch(d)
    lo = np.full(da.shape, -np.inf)
    hi = np.full(da.shape, np.inf)
    feasible = np.ones(da.shape, dtype=bool)
    sq, sp = f.scale_hints
    scale = min(sq, sp)
    for axis, a_coef, b_coef in ((f.q_axis, -sn, c), (f.p_axis, c, sn)):
        start = axis.start
        last = axis.last
        if b_coef == 0.0:
            feasible &= (da * a_coef >= start) & (da * a_coef <= last)
            continue
        e1 = (start - da * a_coef) / b_coef
        e2 = (last - da * a_coef) / b_coef
        lo = np.maximum(lo, np.minimum(e1, e2))
        hi = np.minimum(hi, np.maximum(e1, e2))
        scale = min(scale, (sq if axis is f.q_axis else sp) / abs(b_coef))
    hi = np.where(feasible, hi, lo - 1.0)
    width = np.maximum(hi - lo, 0.0)
    longest = width.max()
    if longest == 0.0:
        vals = np.zeros(da.shape)
        return float(vals[0]) if scalar else vals
    n = int(np.clip(math.ceil(longest * cfg.line_points_per_scale / scale) + 1,
                    9, cfg.line_quad_points))
    s = lo[:, None] + width[:, None] * np.linspace(0.0, 1.0, n)[None, :]
    q = s * c - da[:, None] * sn
    p = s * sn + da[:, None] * c
    g = f.eval(q, p)
    vals = np.where(width > 0.0, np.trapezoid(g, x=s, axis=-1), 0.0)
    return float(vals[0]) if scalar else vals


@dataclass(frozen=True)
class RadonTable:
    """Line integrals F(d, theta) sampled on a (distance, angle) grid."""

    d_axis: GridAxis
    theta_axis: GridAxis
    values: np.ndarray

    def __post_init__(self):
        if self.d_axis.periodic:
            raise ValueError("distance axis must be non-periodic")
        if not self.theta_axis.periodic or abs(self.theta_axis.period - TWO_PI) > 1e-12:
            raise ValueError("theta axis must be periodic with period 2*pi")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.d_axis.count, self.theta_axis.count):
            raise ValueError(f"values shape {vals.shape} does not match axes")
        object.__setattr__(self, "values", vals)

    def eval_at_angles(self, d):
        """Cubic-in-d interpolation at every table angle; d has shape
        (..., theta_count) with one distance per angle column."""
        d = np.asarray(d, dtype=float)
        if d.shape[-1] != self.theta_axis.count:
            raise ValueError("last axis must enumerate the table angles")
        idx, w = axis_stencil(self.d_axis, d)
        cols = np.arange(self.theta_axis.count)
        out = np.zeros(d.shape)
        for a in range(4):
            out += w[..., a] * self.values[idx[..., a], cols]
        return out


def radon_table(f: PlaneDensity, cfg: QuadratureConfig = DEFAULT_CONFIG,
                d_halfwidth: float = 12.0, d_points: int = 481,
                theta_points: int = 240) -> RadonTable:
    """Sample radon_line_integral on a full (d, theta) grid."""
    d_axis = GridAxis.linspace(-d_halfwidth, d_halfwidth, d_points)
    theta_axis = GridAxis.angle_axis(theta_points)
    d = d_axis.points()
    vals = np.empty((d_points, theta_points))
    for k, th in enumerate(theta_axis.points()):
        vals[:, k] = radon_line_integral(f, d, th, cfg)
    return RadonTable(d_axis, theta_axis, vals)


def tangent_circle_average(table: RadonTable, q: float, p: float, r):
    """F_P(r): mean over theta of F(q cos(theta) + p sin(theta) + r, theta).

    This is the average of the line integrals over all lines tangent to the
    circle of radius r centered at P = (q, p); the uniform periodic angle
    grid makes the mean a spectrally accurate quadrature of (1/2pi) int dtheta.
    """
    r = np.asarray(r, dtype=float)
    th = table.theta_axis.points()
    d = q * np.cos(th) + p * np.sin(th) + r[..., None]
    return table.eval_at_angles(d).mean(axis=-1)


def radon_classical_inverse(table: RadonTable, q: float, p: float,
                            cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Tangent-circle inversion: f(q, p) = -(1/pi) int_eps F_P'(r)/r dr.

    F_P is sampled on cfg.r_grid_points nodes over [0, cfg.r_max] and
    differentiated by central differences; the lower cutoff eps =
    cfg.reg_epsilon controls the 0/0 at r = 0 (F_P is even in r).
    """
    eps = cfg.reg_epsilon
    if eps <= 0.0:
        raise ValueError(f"reg_epsilon must be positive, got {eps}")
    if eps >= cfg.r_max:
        raise ValueError(f"r grid [0, {cfg.r_max}] is narrower than the "
                         f"cutoff eps = {eps}")
    r = np.linspace(0.0, cfg.r_max, cfg.r_grid_points)
    fp = tangent_circle_average(table, q, p, r)
    dfp = np.gradient(fp, r)
    tail = r > eps
    r_nodes = np.concatenate(([eps], r[tail]))
    d_nodes = np.concatenate(([np.interp(eps, r, dfp)], dfp[tail]))
    return float(-np.trapezoid(d_nodes / r_nodes, r_nodes) / math.pi)


class PlaneSliceSampler:
    """Forward-transform adapter with the signature plane_inverse consumes.

    Carries total_mass so table builders can fill the degenerate (0, 0)
    node exactly, and advertises the reflection symmetry
    omega(-X, -mu, -nu) = omega(X, mu, nu) that the delta reduction
    satisfies identically, halving table construction.
    """

    geometry = "plane"
    reflection_symmetric = True

    def __init__(self, f: PlaneDensity, cfg: QuadratureConfig = DEFAULT_CONFIG):
        self.density = f
        self.cfg = cfg
        self.total_mass = f.mass()

    def __call__(self, X, mu: float, nu: float):
        return plane_tomogram(self.density, X, mu, nu, self.cfg)


def _mu_axis(cfg: QuadratureConfig) -> np.ndarray:
    return np.linspace(-cfg.nu_grid_half_width, cfg.nu_grid_half_width,
                       cfg.mu_grid_points)


def _x_fourier_weights(cfg: QuadratureConfig):
    X = np.linspace(-cfg.x_half_width, cfg.x_half_width, cfg.x_grid_points)
    w = np.full(X.size, X[1] - X[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return X, w


def _cartesian_table(omega, cfg: QuadratureConfig):
    """G(mu, nu) = int omega(X, mu, nu) e^{iX} dX on the (mu, nu) grid."""
    X, wx = _x_fourier_weights(cfg)
    phase = wx * np.exp(1j * X)
    mu = _mu_axis(cfg)
    n = mu.size
    c = n // 2
    G = np.empty((n, n), dtype=complex)
    mass = np.full((n, n), np.nan)
    symmetric = getattr(omega, "reflection_symmetric", False)

    def fill(i, j):
        sl = np.asarray(omega(X, mu[i], mu[j]), dtype=float)
        G[i, j] = sl @ phase
        mass[i, j] = sl @ wx
        if symmetric:
            G[n - 1 - i, n - 1 - j] = np.conj(G[i, j])
            mass[n - 1 - i, n - 1 - j] = mass[i, j]

    for i in range(c, n) if symmetric else range(n):
        j_lo = (c + 1 if i == c else 0) if symmetric else 0
        for j in range(j_lo, n):
            if i == c and j == c:
                continue
            fill(i, j)

    total = getattr(omega, "total_mass", None)
    if total is not None:
        G[c, c] = complex(total)
        mass[c, c] = total
    else:
        G[c, c] = 0.25 * (G[c - 1, c] + G[c + 1, c] + G[c, c - 1] + G[c, c + 1]).real
        mass[c, c] = G[c, c].real
        warnings.warn("omega(X, 0, 0) is degenerate; filled the Fourier table "
                      "center from neighboring nodes. Supply total_mass for "
                      "the exact value.", AccuracyWarning)
        total = 1.0
    # short slices (std <= 2 here) fit well inside the X box, so a mass
    # deficit there means undersampling rather than benign tail truncation
    S = np.hypot(mu[:, None], mu[None, :])
    core = (S > 0.0) & (S <= 2.0)
    drift = np.abs(mass[core] - total).max()
    if drift > 1e-3 * max(abs(total), 1.0):
        warnings.warn(f"tomogram slices near the origin integrate to "
                      f"total mass +/- {drift:.2e}; the X sampling looks "
                      f"too coarse or too narrow", AccuracyWarning)
    return mu, G


def _cartesian_synth(mu, G, q, p):
    wmu = np.full(mu.size, mu[1] - mu[0])
    wmu[0] *= 0.5
    wmu[-1] *= 0.5
    GW = G * np.outer(wmu, wmu)
    qb, pb = np.broadcast_arrays(np.asarray(q, float), np.asarray(p, float))
    flat_q = qb.reshape(-1)
    flat_p = pb.reshape(-1)
    out = np.empty(flat_q.size)
    chunk = 4096
    for k0 in range(0, flat_q.size, chunk):
        qc = flat_q[k0:k0 + chunk]
        pc = flat_p[k0:k0 + chunk]
        Eq = np.exp(-1j * np.outer(qc, mu))
        Ep = np.exp(-1j * np.outer(pc, mu))
        out[k0:k0 + chunk] = np.einsum("ti,ij,tj->t", Eq, GW, Ep).real
    out /= TWO_PI ** 2
    if qb.ndim == 0 or (np.ndim(q) == 0 and np.ndim(p) == 0):
        return float(out[0])
    return out.reshape(qb.shape)


_POLAR_THETA = 256
_POLAR_R_STEP = 0.025


def _polar_table(omega, cfg: QuadratureConfig):
    X, wx = _x_fourier_weights(cfg)
    th = TWO_PI * np.arange(_POLAR_THETA) / _POLAR_THETA
    nr = int(round(cfg.polar_r_max / _POLAR_R_STEP)) + 1
    r = np.linspace(0.0, cfg.polar_r_max, nr)
    slices = np.empty((_POLAR_THETA, X.size))
    for k in range(_POLAR_THETA):
        slices[k] = np.asarray(omega(X, math.cos(th[k]), math.sin(th[k])),
                               dtype=float)
    # W(theta, r) = int omega(X, cos, sin) e^{irX} dX, exact per r node
    W = (slices * wx) @ np.exp(1j * np.outer(X, r))
    return th, r, W


def _polar_synth(th, r, W, cfg, q, p):
    wr = np.full(r.size, r[1] - r[0])
    wr[0] *= 0.5
    wr[-1] *= 0.5
    radial = wr * r * np.exp(-cfg.polar_eta * r * r)
    u0 = q * np.cos(th) + p * np.sin(th)
    ker = np.exp(-1j * np.outer(u0, r)) * radial
    return float((W * ker).sum().real * (TWO_PI / th.size) / TWO_PI ** 2)


def plane_inverse(omega, q, p, cfg: QuadratureConfig = DEFAULT_CONFIG,
                  mode: str = "cartesian"):
    """Reconstruct f(q, p) from a tomogram sampler omega(X, mu, nu).

    cartesian: Re (2pi)^-2 iint [int omega e^{iX} dX] e^{-i(mu q + nu p)},
    trapezoid on the X in [-x_half_width, x_half_width] by (mu, nu) in
    [-nu_grid_half_width, ..]^2 box (x_grid_points and mu_grid_points nodes).

    polar: same integral over unit directions, f = Re (2pi)^-2 iint
    omega(X, cos t, sin t) K(X - q cos t - p sin t) dX dt with the tapered
    radial kernel K(u) = int_0^rmax r e^{-eta r^2 + iru} dr.  Slower and
    regularization-dependent; kept as a cross-check of the cartesian route.
    """
    if mode == "cartesian":
        mu, G = _cartesian_table(omega, cfg)
        return _cartesian_synth(mu, G, q, p)
    if mode == "polar":
        th, r, W = _polar_table(omega, cfg)
        qb, pb = np.broadcast_arrays(np.asarray(q, float), np.asarray(p, float))
        if qb.ndim == 0:
            return _polar_synth(th, r, W, cfg, float(qb), float(pb))
        out = np.array([_polar_synth(th, r, W, cfg, qq, pp)
                        for qq, pp in zip(qb.reshape(-1), pb.reshape(-1))])
        return out.reshape(qb.shape)
    raise ValueError(f"unknown inverse mode {mode!r}")
