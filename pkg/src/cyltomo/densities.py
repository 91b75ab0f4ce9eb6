"""Probability densities on the plane, the cylinder, and the torus.

Densities are stored as samples on uniform grids and evaluated between
nodes with the cubic rule from :mod:`cyltomo.interp`.  The cylinder carries
an angle phi on [0, 2*pi) (periodic) and a momentum J on a symmetric
non-periodic axis; evaluation beyond the momentum grid returns 0.

Scale hints (sigma_phi, sigma_j) travel with each density so quadratures
can pick safe node spacings; sigma_phi = inf marks densities uniform in
phi.  The hints never change values, only node counts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import AccuracyWarning, QuadratureConfig, DEFAULT_CONFIG
from .grid import GridAxis, TWO_PI, wrap_angle
from .interp import grid_eval_2d, grid_eval_nd

__all__ = [
    "PlaneDensity",
    "CylinderDensity",
    "TorusDensity",
    "default_plane_axes",
    "default_cylinder_axes",
    "make_plane_gaussian",
    "make_uniform_phi_gaussian",
    "make_wrapped_gaussian",
    "make_wrapped_mixture",
    "periodic_extension_eval",
    "total_mass",
    "eval_density",
    "wrapped_gaussian_profile",
]

_INV_ROOT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _validate_values(values: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != shape:
        raise ValueError(f"values shape {values.shape} does not match axes {shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("density values must be finite")
    if values.min() < -1e-12:
        raise ValueError(f"density values must be nonnegative, min = {values.min()}")
    return np.maximum(values, 0.0)


@dataclass(frozen=True)
class PlaneDensity:
    """Density f(q, p) on R^2, sampled on a rectangular grid."""

    q_axis: GridAxis
    p_axis: GridAxis
    values: np.ndarray
    mass_tol: float = 1e-8
    tail_tol: float = 1e-10
    scale_hints: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self):
        if self.q_axis.periodic or self.p_axis.periodic:
            raise ValueError("plane axes must be non-periodic")
        object.__setattr__(self, "values",
                           _validate_values(self.values, (self.q_axis.count, self.p_axis.count)))
        edge = max(self.values[0].max(), self.values[-1].max(),
                   self.values[:, 0].max(), self.values[:, -1].max())
        if edge > self.tail_tol:
            warnings.warn(f"plane density does not decay at the grid edge "
                          f"(max boundary value {edge:.3e})", AccuracyWarning)

    def eval(self, q, p):
        return grid_eval_2d(self.values, self.q_axis, self.p_axis, q, p)

    def mass(self) -> float:
        qi = np.trapezoid(self.values, dx=self.q_axis.step, axis=0)
        return float(np.trapezoid(qi, dx=self.p_axis.step))


@dataclass(frozen=True)
class CylinderDensity:
    """Density f(phi, J) on the cylinder S^1 x R.

    phi_axis is periodic with period 2*pi (its start fixes the fundamental
    strip used by gauge-dependent operations); j_axis is non-periodic and
    symmetric about 0.
    """

    phi_axis: GridAxis
    j_axis: GridAxis
    values: np.ndarray
    mass_tol: float = 1e-8
    tail_tol: float = 1e-10
    scale_hints: tuple[float, float] = (0.35, 0.5)

    def __post_init__(self):
        if not self.phi_axis.periodic:
            raise ValueError("phi axis must be periodic")
        if abs(self.phi_axis.period - TWO_PI) > 1e-12:
            raise ValueError(f"phi axis period must be 2*pi, got {self.phi_axis.period}")
        if self.j_axis.periodic:
            raise ValueError("J axis must be non-periodic")
        if abs(self.j_axis.start + self.j_axis.last) > 1e-9:
            raise ValueError("J axis must be symmetric about 0")
        object.__setattr__(self, "values",
                           _validate_values(self.values, (self.phi_axis.count, self.j_axis.count)))
        tail = max(self.values[:, 0].max(), self.values[:, -1].max())
        if tail > self.tail_tol:
            warnings.warn(f"cylinder density does not decay at the J-grid edge "
                          f"(max edge value {tail:.3e})", AccuracyWarning)

    @property
    def j_halfwidth(self) -> float:
        return self.j_axis.last

    def eval(self, phi, j):
        return grid_eval_2d(self.values, self.phi_axis, self.j_axis, phi, j)

    def mass(self) -> float:
        ji = np.trapezoid(self.values, dx=self.j_axis.step, axis=1)
        return float(ji.mean() * TWO_PI)

    def translated(self, alpha: float) -> "CylinderDensity":
        """Density tau_alpha f with tau_alpha f(phi, J) = f(phi + alpha, J).

        Resampled on the same grid through the periodic cubic rule.
        """
        shifted = self.phi_axis.points() + alpha
        vals = grid_eval_2d(self.values, self.phi_axis, self.j_axis,
                            shifted[:, None], self.j_axis.points()[None, :])
        return CylinderDensity(self.phi_axis, self.j_axis, vals,
                               self.mass_tol, self.tail_tol, self.scale_hints)


@dataclass(frozen=True)
class TorusDensity:
    """Density on (S^1 x R)^N for N <= 3.

    Either a full sample grid (N <= 2) or a product of cylinder factors
    (any N; required at N = 3).  Product form keeps the storage linear in N.
    """

    factors: tuple[CylinderDensity, ...] | None = None
    axes: tuple[GridAxis, ...] = ()
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.factors is not None:
            factors = tuple(self.factors)
            if not 1 <= len(factors) <= 3:
                raise ValueError(f"N must be 1..3, got {len(factors)}")
            object.__setattr__(self, "factors", factors)
            object.__setattr__(self, "axes", tuple(
                ax for f in factors for ax in (f.phi_axis, f.j_axis)))
            return
        if self.values is None:
            raise ValueError("need either factors or a full value grid")
        n2 = len(self.axes)
        if n2 % 2 != 0 or not 2 <= n2 <= 4:
            raise ValueError("full grids support N in {1, 2}: axes must come in "
                             "(phi, J) pairs")
        vals = _validate_values(self.values, tuple(ax.count for ax in self.axes))
        object.__setattr__(self, "values", vals)

    @property
    def n_components(self) -> int:
        return len(self.axes) // 2

    def eval(self, *coords):
        if len(coords) != 2 * self.n_components:
            raise ValueError("expected phi_1, J_1, ..., phi_N, J_N")
        if self.factors is not None:
            out = self.factors[0].eval(coords[0], coords[1])
            for k, f in enumerate(self.factors[1:], start=1):
                out = out * f.eval(coords[2 * k], coords[2 * k + 1])
            return out
        return grid_eval_nd(self.values, self.axes, coords)

    def mass(self) -> float:
        if self.factors is not None:
            out = 1.0
            for f in self.factors:
                out *= f.mass()
            return out
        vals = self.values
        for k in range(self.n_components - 1, -1, -1):
            j_ax = self.axes[2 * k + 1]
            phi_ax = self.axes[2 * k]
            vals = np.trapezoid(vals, dx=j_ax.step, axis=2 * k + 1)
            vals = vals.mean(axis=2 * k) * phi_ax.period
        return float(vals)

    def materialized(self) -> "TorusDensity":
        """Full-grid copy (N <= 2 only; the tensor is too large beyond that)."""
        if self.factors is None:
            return self
        if self.n_components > 2:
            raise ValueError("full grids are limited to N <= 2")
        grids = [f.values for f in self.factors]
        if self.n_components == 1:
            vals = grids[0]
        else:
            vals = np.einsum("ab,cd->abcd", grids[0], grids[1])
        return TorusDensity(axes=self.axes, values=vals)


def default_cylinder_axes(phi_points: int = 256, j_points: int = 513,
                          j_halfwidth: float = 8.0, alpha: float = 0.0
                          ) -> tuple[GridAxis, GridAxis]:
    phi = GridAxis.angle_axis(phi_points, start=alpha)
    j = GridAxis.linspace(-j_halfwidth, j_halfwidth, j_points)
    return phi, j


def default_plane_axes(points: int = 513, halfwidth: float = 8.0
                       ) -> tuple[GridAxis, GridAxis]:
    q = GridAxis.linspace(-halfwidth, halfwidth, points)
    return q, GridAxis.linspace(-halfwidth, halfwidth, points)


def make_plane_gaussian(q0: float = 0.0, p0: float = 0.0,
                        sigma_q: float = 1.0, sigma_p: float = 1.0,
                        axes: tuple[GridAxis, GridAxis] | None = None,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> PlaneDensity:
    """Normalized Gaussian on the plane; defaults give the standard one."""
    if sigma_q <= 0 or sigma_p <= 0:
        raise ValueError("sigma_q and sigma_p must be positive")
    q_axis, p_axis = axes if axes is not None else default_plane_axes()
    q = q_axis.points()[:, None]
    p = p_axis.points()[None, :]
    vals = (np.exp(-0.5 * ((q - q0) / sigma_q) ** 2 - 0.5 * ((p - p0) / sigma_p) ** 2)
            / (2.0 * math.pi * sigma_q * sigma_p))
    return PlaneDensity(q_axis, p_axis, vals, cfg.mass_tol, cfg.tail_tol,
                        scale_hints=(sigma_q, sigma_p))


def make_uniform_phi_gaussian(sigma: float = 1.0,
                              axes: tuple[GridAxis, GridAxis] | None = None,
                              cfg: QuadratureConfig = DEFAULT_CONFIG) -> CylinderDensity:
    """f(phi, J) = exp(-J^2 / 2 sigma^2) / ((2 pi)^{3/2} sigma): uniform in phi.

    sigma = 1 gives the reference Gaussian with peak (2 pi)^{-3/2}.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    phi_axis, j_axis = axes if axes is not None else default_cylinder_axes()
    if j_axis.last < 6.0 * sigma:
        warnings.warn(f"J grid half-width {j_axis.last} is below 6 sigma = "
                      f"{6.0 * sigma}; tails will be clipped", AccuracyWarning)
    j = j_axis.points()[None, :]
    prof = np.exp(-0.5 * (j / sigma) ** 2) / ((2.0 * math.pi) ** 1.5 * sigma)
    vals = np.repeat(prof, phi_axis.count, axis=0)
    return CylinderDensity(phi_axis, j_axis, vals, cfg.mass_tol, cfg.tail_tol,
                           scale_hints=(math.inf, sigma))


def wrapped_gaussian_profile(phi: np.ndarray, phi0: float, sigma: float,
                             wrap_terms: int) -> np.ndarray:
    """Wrapped normal profile sum_{|k|<=K} N(phi - 2 pi k; phi0, sigma)."""
    phi = np.asarray(phi, float)
    out = np.zeros(phi.shape)
    for k in range(-wrap_terms, wrap_terms + 1):
        z = (phi - phi0 - TWO_PI * k) / sigma
        out += np.exp(-0.5 * z * z)
    return out * _INV_ROOT_2PI / sigma


def _auto_wrap_terms(sigma_phi: float, tail_tol: float) -> int:
    # images beyond 2*pi*K - pi > ~6.1 sigma contribute below double tails
    reach = sigma_phi * math.sqrt(max(2.0 * math.log(1.0 / max(tail_tol, 1e-300)), 4.0))
    return max(1, int(math.ceil((reach + math.pi) / TWO_PI)) + 1)


def make_wrapped_gaussian(phi0: float = math.pi, sigma_phi: float = 0.7,
                          j0: float = 0.0, sigma_j: float = 1.0,
                          wrap_terms: int | None = None,
                          axes: tuple[GridAxis, GridAxis] | None = None,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> CylinderDensity:
    """Wrapped-normal-in-phi times normal-in-J density on the cylinder."""
    if sigma_phi <= 0 or sigma_j <= 0:
        raise ValueError("sigma_phi and sigma_j must be positive")
    phi_axis, j_axis = axes if axes is not None else default_cylinder_axes()
    terms = wrap_terms if wrap_terms is not None else _auto_wrap_terms(sigma_phi, cfg.tail_tol)
    if terms < 1:
        raise ValueError(f"wrap_terms must be >= 1, got {terms}")
    prof_phi = wrapped_gaussian_profile(phi_axis.points(), phi0, sigma_phi, terms)
    j = j_axis.points()
    prof_j = np.exp(-0.5 * ((j - j0) / sigma_j) ** 2) * _INV_ROOT_2PI / sigma_j
    vals = prof_phi[:, None] * prof_j[None, :]
    return CylinderDensity(phi_axis, j_axis, vals, cfg.mass_tol, cfg.tail_tol,
                           scale_hints=(sigma_phi, sigma_j))


def make_wrapped_mixture(components: list[tuple[float, float, float, float, float]],
                         axes: tuple[GridAxis, GridAxis] | None = None,
                         cfg: QuadratureConfig = DEFAULT_CONFIG) -> CylinderDensity:
    """Convex mixture of wrapped Gaussians.

    components: (weight, phi0, sigma_phi, j0, sigma_j) tuples; weights are
    normalized to sum to 1.
    """
    if not components:
        raise ValueError("need at least one mixture component")
    weights = np.array([c[0] for c in components], float)
    if weights.min() <= 0:
        raise ValueError("mixture weights must be positive")
    weights = weights / weights.sum()
    phi_axis, j_axis = axes if axes is not None else default_cylinder_axes()
    vals = np.zeros((phi_axis.count, j_axis.count))
    min_sphi = math.inf
    min_sj = math.inf
    for w, (_, phi0, sphi, j0, sj) in zip(weights, components):
        part = make_wrapped_gaussian(phi0, sphi, j0, sj, axes=(phi_axis, j_axis), cfg=cfg)
        vals += w * part.values
        min_sphi = min(min_sphi, sphi)
        min_sj = min(min_sj, sj)
    return CylinderDensity(phi_axis, j_axis, vals, cfg.mass_tol, cfg.tail_tol,
                           scale_hints=(min_sphi, min_sj))


def periodic_extension_eval(density: CylinderDensity, phi, j):
    """Evaluate the 2*pi-periodic extension of a fundamental-strip density.

    The wrap phi -> alpha + ((phi - alpha) mod 2 pi) with alpha the strip
    origin is built into the periodic axis, so this is plain evaluation.
    """
    return density.eval(phi, j)


def total_mass(density) -> float:
    """Grid trapezoid mass of any density object with a .mass() method."""
    return density.mass()


def eval_density(density, *coords):
    """Pointwise evaluation dispatch (plane: (q, p); cylinder: (phi, J); torus)."""
    return density.eval(*coords)


def assert_normalized(density, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    m = density.mass()
    if abs(m - 1.0) > cfg.mass_tol:
        warnings.warn(f"density mass {m!r} deviates from 1 beyond mass_tol "
                      f"{cfg.mass_tol}", AccuracyWarning)
    return m


__all__.append("assert_normalized")
