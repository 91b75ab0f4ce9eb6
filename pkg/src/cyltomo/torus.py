"""Component-diagonal tomography on the N-torus phase space.

A torus tomogram integrates the density against a product of one delta per
component, delta(X_k - m_k phi_k - nu_k J_k), so it reduces component by
component with the same strip/helix rules as the single-circle transforms.
Product densities factor into a product of 1-D tomograms.  Full-grid (non
product) densities are supported for N <= 2 by reducing the trailing
component into a partial tomogram on the leading component's grid and then
delegating to the circle operations; the reduction reuses the circle node
sets and weights so the two density representations agree to rounding.

The inverse is provided for product tomogram data: the 2N-fold Fourier
reconstruction separates into a product of per-component circle inversions.
Dense non-product reconstructions are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle import (
    _cubic_slope_weights,
    circle_inverse_helix,
    circle_inverse_strip,
    helix_tomogram,
    strip_tomogram,
)
from .config import DEFAULT_CONFIG, QuadratureConfig
from .densities import CylinderDensity, TorusDensity
from .grid import GridAxis, TWO_PI, wrap_angle
from .interp import axis_stencil
from .quadrature import corrected_trapezoid

__all__ = [
    "TorusTomogramParams",
    "torus_tomogram",
    "torus_inverse",
]


@dataclass(frozen=True)
class TorusTomogramParams:
    """Per-component line labels; alpha = None selects the helix variant."""

    m: tuple
    nu: tuple
    alpha: tuple | None = None

    def __post_init__(self):
        m_raw = np.atleast_1d(self.m)
        if not np.array_equal(m_raw, np.round(m_raw)):
            raise ValueError(f"winding numbers must be integers, got {self.m}")
        m = tuple(int(v) for v in m_raw)
        nu = tuple(float(v) for v in np.atleast_1d(self.nu))
        if not 1 <= len(m) <= 3:
            raise ValueError(f"component count must be 1..3, got {len(m)}")
        if len(nu) != len(m):
            raise ValueError("m and nu must have the same length")
        alpha = self.alpha
        if alpha is not None:
            alpha = tuple(float(v) for v in np.atleast_1d(alpha))
            if len(alpha) != len(m):
                raise ValueError("alpha must match the component count")
        for k, (mk, nuk) in enumerate(zip(m, nu)):
            if mk == 0 and nuk == 0.0:
                raise ValueError(f"component {k}: (m, nu) = (0, 0) is degenerate")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "alpha", alpha)

    @property
    def n_components(self) -> int:
        return len(self.m)

    @property
    def variant(self) -> str:
        return "helix" if self.alpha is None else "strip"


def _component_value(factor: CylinderDensity, X, m, nu, alpha,
                     cfg: QuadratureConfig, stride):
    if alpha is None:
        return helix_tomogram(factor, X, m, nu, cfg, stride=stride)
    return strip_tomogram(factor, X, m, nu, alpha, cfg, stride=stride)


_OFF6 = np.arange(-2, 4)


def _eval_stack(values, phi_axis: GridAxis, j_axis: GridAxis, phi_pts, j_pts):
    """Cubic 2-D evaluation in the two trailing axes of a stacked grid."""
    idxp, wp = axis_stencil(phi_axis, np.asarray(phi_pts, float))
    idxj, wj = axis_stencil(j_axis, np.asarray(j_pts, float))
    out = np.zeros(values.shape[:-2] + np.shape(phi_pts))
    for a in range(4):
        for b in range(4):
            out += (wp[..., a] * wj[..., b]) * values[..., idxp[..., a], idxj[..., b]]
    return out


def _reduce_m0(values, j_axis: GridAxis, X, nu):
    # phi integral over the full circle at fixed J = X/nu, quintic in J to
    # match the 1-D m = 0 rule
    u = (X / nu - j_axis.start) / j_axis.step
    if not 0.0 <= u <= j_axis.count - 1.0:
        return np.zeros(values.shape[:-2])
    base = int(np.clip(math.floor(u), 2, j_axis.count - 4))
    t = u - base
    w = np.ones(6)
    for a, oa in enumerate(_OFF6):
        for ob in _OFF6:
            if ob != oa:
                w[a] *= (t - ob) / (oa - ob)
    rows = np.zeros(values.shape[:-1])
    for a in range(6):
        rows += w[a] * values[..., base + _OFF6[a]]
    return rows.mean(axis=-1) * TWO_PI / abs(nu)


def _reduce_helix(values, phi_axis: GridAxis, j_axis: GridAxis, X, m, nu):
    period = TWO_PI * abs(m)
    Xc = float(wrap_angle(X, period))
    u = j_axis.points()
    phi_arg = wrap_angle((Xc - nu * u) / m)
    idx, w = axis_stencil(phi_axis, phi_arg)
    cols = np.arange(j_axis.count)
    g = np.zeros(values.shape[:-2] + u.shape)
    for a in range(4):
        g += w[:, a] * values[..., idx[:, a], cols]
    return corrected_trapezoid(g, u) / abs(m)


def _reduce_strip_nu0(values, phi_axis: GridAxis, j_axis: GridAxis, X, m, alpha):
    phi_hit = X / m
    if not alpha <= phi_hit < alpha + TWO_PI:
        return np.zeros(values.shape[:-2])
    idx, w = axis_stencil(phi_axis, np.asarray(phi_hit))
    col = np.zeros(values.shape[:-2] + (j_axis.count,))
    for a in range(4):
        col += w[a] * values[..., idx[a], :]
    return np.trapezoid(col, dx=j_axis.step, axis=-1) / abs(m)


def _reduce_strip(values, phi_axis: GridAxis, j_axis: GridAxis, X, m, nu,
                  alpha):
    e1 = (X - m * alpha) / nu
    e2 = (X - m * (alpha + TWO_PI)) / nu
    lo = max(min(e1, e2), j_axis.start)
    hi = min(max(e1, e2), j_axis.last)
    lead = values.shape[:-2]
    if hi - lo <= 1e-14:
        return np.zeros(lead)
    sh = j_axis.step
    k0 = int(math.ceil((lo - j_axis.start) / sh - 1e-12))
    if j_axis.start + k0 * sh <= lo + 1e-13:
        k0 += 1
    k1 = int(math.floor((hi - j_axis.start) / sh + 1e-12))
    if j_axis.start + k1 * sh >= hi - 1e-13:
        k1 -= 1
    n_int = k1 - k0 + 1
    if n_int < 4:
        u = np.linspace(lo, hi, 9)
        g = _eval_stack(values, phi_axis, j_axis, (X - nu * u) / m, u)
        return corrected_trapezoid(g, u) / abs(m)
    cols = np.arange(k0, k1 + 1)
    u = j_axis.start + cols * sh
    idx, w = axis_stencil(phi_axis, (X - nu * u) / m)
    F = np.zeros(lead + u.shape)
    for a in range(4):
        F += w[:, a] * values[..., idx[:, a], cols]
    F_lo = _eval_stack(values, phi_axis, j_axis, (X - nu * lo) / m, lo)
    F_hi = _eval_stack(values, phi_axis, j_axis, (X - nu * hi) / m, hi)
    d0 = u[0] - lo
    d1 = hi - u[-1]
    W = np.full(u.shape, sh)
    W[0] += (d0 - sh) / 2.0
    W[-1] += (d1 - sh) / 2.0
    T = (W * F).sum(axis=-1) + 0.5 * d0 * F_lo + 0.5 * d1 * F_hi
    FL = F[..., :4]
    FR = F[..., -1:-5:-1]
    tau0 = np.zeros(())
    g_lo = (_cubic_slope_weights(np.asarray(-d0 / sh)) * FL).sum(axis=-1) / sh
    g_first = (_cubic_slope_weights(tau0) * FL).sum(axis=-1) / sh
    g_hi = -(_cubic_slope_weights(np.asarray(-d1 / sh)) * FR).sum(axis=-1) / sh
    g_last = -(_cubic_slope_weights(tau0) * FR).sum(axis=-1) / sh
    out = (T
           + (d0 * d0 / 12.0) * g_lo
           + ((sh * sh - d0 * d0) / 12.0) * g_first
           - ((sh * sh - d1 * d1) / 12.0) * g_last
           - (d1 * d1 / 12.0) * g_hi)
    return out / abs(m)


def _reduce_last(values, phi_axis: GridAxis, j_axis: GridAxis, X, m, nu,
                 alpha, cfg: QuadratureConfig):
    """Integrate out the trailing (phi, J) component of a stacked grid."""
    if m == 0:
        return _reduce_m0(values, j_axis, X, nu)
    if alpha is None:
        return _reduce_helix(values, phi_axis, j_axis, X, m, nu)
    if nu == 0.0:
        return _reduce_strip_nu0(values, phi_axis, j_axis, X, m, alpha)
    return _reduce_strip(values, phi_axis, j_axis, X, m, nu, alpha)


def torus_tomogram(f: TorusDensity, X, params: TorusTomogramParams,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Product-delta tomogram of an N-torus density at the vector point X.

    Product densities factor exactly into circle tomograms.  Full grids
    (N = 2) reduce the second component first, with unstrided mirrors of the
    circle quadrature rules, and hand the partial tomogram to the circle
    transform.  At N = 1 this is the circle transform itself.
    """
    N = params.n_components
    if f.n_components != N:
        raise ValueError(f"density has {f.n_components} components, "
                         f"parameters have {N}")
    Xv = np.asarray(X, dtype=float).reshape(-1)
    if Xv.size != N:
        raise ValueError(f"X must have {N} components, got {Xv.size}")
    alphas = params.alpha if params.alpha is not None else (None,) * N

    if f.factors is not None:
        out = 1.0
        for k in range(N):
            out *= _component_value(f.factors[k], float(Xv[k]), params.m[k],
                                    params.nu[k], alphas[k], cfg, None)
        return float(out)

    if N == 1:
        single = CylinderDensity(f.axes[0], f.axes[1], f.values,
                                 cfg.mass_tol, cfg.tail_tol)
        return float(_component_value(single, float(Xv[0]), params.m[0],
                                      params.nu[0], alphas[0], cfg, None))
    if N > 2:
        raise ValueError("full-grid densities support N <= 2; use the "
                         "product form for N = 3")

    partial = _reduce_last(f.values, f.axes[2], f.axes[3], float(Xv[1]),
                           params.m[1], params.nu[1], alphas[1], cfg)
    reduced = CylinderDensity(f.axes[0], f.axes[1], np.maximum(partial, 0.0),
                              cfg.mass_tol, cfg.tail_tol)
    return float(_component_value(reduced, float(Xv[0]), params.m[0],
                                  params.nu[0], alphas[0], cfg, 1))


def torus_inverse(samplers, phi, j, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Reconstruct a product density from per-component tomogram samplers.

    samplers is a sequence of circle samplers, each declaring its geometry
    ("strip" or "helix"); the 2N-fold Fourier inversion separates into the
    product of the per-component circle inversions.  phi and j give the
    target point per component (scalars, or broadcastable arrays for many
    targets at once).
    """
    if hasattr(samplers, "geometry"):
        samplers = [samplers]
    samplers = list(samplers)
    N = len(samplers)
    if not 1 <= N <= 3:
        raise ValueError(f"component count must be 1..3, got {N}")
    phis = list(phi) if isinstance(phi, (list, tuple, np.ndarray)) else [phi]
    js = list(j) if isinstance(j, (list, tuple, np.ndarray)) else [j]
    if len(phis) != N or len(js) != N:
        raise ValueError(f"phi and j must each have {N} components")
    out = 1.0
    for k, sampler in enumerate(samplers):
        geometry = getattr(sampler, "geometry", None)
        if geometry == "strip":
            val = circle_inverse_strip(sampler, phis[k], js[k], cfg)
        elif geometry == "helix":
            val = circle_inverse_helix(sampler, phis[k], js[k], cfg)
        else:
            raise ValueError("each sampler must declare geometry 'strip' "
                             "or 'helix'")
        out = out * np.asarray(val)
    if np.ndim(out) == 0 or out.size == 1:
        return float(np.asarray(out).reshape(()))
    return out
