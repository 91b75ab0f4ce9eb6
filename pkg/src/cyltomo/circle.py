"""Tomograms on the cylinder and their inverses.

Two transform families share the line set X = m*phi + nu*J:

* strip tomograms omega^(alpha): the phi integral runs over one fundamental
  interval I_alpha = [alpha, alpha + 2*pi), so each (m, nu) slice lives on
  the whole X line and carries the gauge label alpha;
* helix tomograms omega~: the delta is reduced modulo 2*pi*m, equivalently
  the J integral runs over the full line with f evaluated periodically, so
  each m != 0 slice is 2*pi*|m|-periodic in X.

Forward evaluation reduces the delta to a 1-D quadrature whose interior
nodes are J-grid columns (stored values, no J interpolation), with exact
window endpoints and an endpoint-slope correction.  Inversion computes, per
(m, nu), the X-Fourier integral of the slice at unit frequency and then
synthesizes f(phi, J) as a Fourier series in phi and a Fourier integral in
nu.  The X integration never shortcuts through the density: it consumes
slice values exactly as a file-backed consumer would.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import AccuracyWarning, DEFAULT_CONFIG, QuadratureConfig
from .densities import CylinderDensity
from .grid import GridAxis, TWO_PI, wrap_angle
from .interp import axis_stencil, grid_eval_2d
from .quadrature import corrected_trapezoid, filon_cubic

__all__ = [
    "StripTomogramParams",
    "HelixTomogramParams",
    "HelixParams",
    "strip_tomogram",
    "helix_tomogram",
    "gauge_translate",
    "strip_to_helix_resum",
    "strip_fourier_value",
    "helix_fourier_value",
    "fourier_equality_diagnostic",
    "DensityStripSampler",
    "DensityHelixSampler",
    "circle_inverse_strip",
    "circle_inverse_helix",
    "helix_params_from_tomogram",
    "helix_params_to_tomogram",
]


@dataclass(frozen=True)
class StripTomogramParams:
    """(m, nu, alpha) labels for a one-interval tomogram slice."""

    m: int
    nu: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.m == 0 and self.nu == 0.0:
            raise ValueError("(m, nu) = (0, 0) is degenerate")
        object.__setattr__(self, "alpha", wrap_angle(self.alpha))


@dataclass(frozen=True)
class HelixTomogramParams:
    """(m, nu) labels for a whole-helix tomogram slice."""

    m: int
    nu: float

    def __post_init__(self):
        if self.m == 0 and self.nu == 0.0:
            raise ValueError("(m, nu) = (0, 0) is degenerate")

    @property
    def period(self) -> float | None:
        """Circumference of the X-circle S_m, or None on the m = 0 line."""
        return TWO_PI * abs(self.m) if self.m != 0 else None


@dataclass(frozen=True)
class HelixParams:
    """Slope angle, intercept and shift of a helix on the cylinder.

    theta lies strictly inside (-pi, 0), the intercept in [0, 2*pi), and
    the shift satisfies r = (2*pi - intercept) * tan(theta).
    """

    theta: float
    intercept: float
    shift: float

    def __post_init__(self):
        if not (-math.pi < self.theta < 0.0):
            raise ValueError(f"theta must lie in (-pi, 0), got {self.theta}")
        if not (0.0 <= self.intercept < TWO_PI):
            raise ValueError(f"intercept must lie in [0, 2*pi), got {self.intercept}")
        want = (TWO_PI - self.intercept) * math.tan(self.theta)
        if abs(self.shift - want) > 1e-9 * max(1.0, abs(want)):
            raise ValueError("shift is inconsistent with (theta, intercept)")


def _phi_scale(f: CylinderDensity) -> float:
    s = f.scale_hints[0]
    return s if s and s > 0 else math.inf


def _j_scale(f: CylinderDensity) -> float:
    s = f.scale_hints[1]
    return s if s and s > 0 else 0.5


def _u_scale(f: CylinderDensity, m: int, nu: float) -> float:
    """Shortest variation scale of u -> f((X - nu u)/m, u) along u."""
    sj = _j_scale(f)
    sp = _phi_scale(f)
    if m == 0 or not math.isfinite(sp) or nu == 0.0:
        return sj
    return min(sj, abs(m) * sp / abs(nu))


def _stride(f: CylinderDensity, scale: float, per_scale: int = 8) -> int:
    """Largest power-of-two J-grid stride resolving `scale` with per_scale nodes."""
    h = f.j_axis.step
    s = 1
    cells = f.j_axis.count - 1
    while (s * 2 * h) * per_scale <= scale and s * 2 <= 16 and cells % (s * 2) == 0:
        s *= 2
    return s


def _as_batch(X):
    arr = np.atleast_1d(np.asarray(X, dtype=float))
    return arr, np.ndim(X) == 0


def _eval_at_columns(f: CylinderDensity, phi_args: np.ndarray,
                     col_idx: np.ndarray) -> np.ndarray:
    """f evaluated at (phi_args, J-grid column col_idx), broadcast together.

    Hitting stored J columns exactly reduces the 2-D stencil to a 1-D
    periodic cubic along phi: four gathers instead of sixteen.
    """
    idx, w = axis_stencil(f.phi_axis, phi_args)
    phi_b, cols = np.broadcast_arrays(phi_args, col_idx)
    out = np.zeros(phi_b.shape)
    for a in range(4):
        out += w[..., a] * f.values[idx[..., a], cols]
    return out


def _strip_slice_nu0(f: CylinderDensity, X: np.ndarray, m: int, alpha: float):
    # delta fixes phi = X/m; contributes only when that lands in the literal
    # half-open interval [alpha, alpha + 2 pi), no wrapping
    phi_hit = X / m
    inside = (phi_hit >= alpha) & (phi_hit < alpha + TWO_PI)
    out = np.zeros(X.shape)
    if inside.any():
        cols = grid_eval_2d(f.values, f.phi_axis, f.j_axis,
                            phi_hit[inside, None], f.j_axis.points()[None, :])
        out[inside] = np.trapezoid(cols, dx=f.j_axis.step, axis=-1) / abs(m)
    return out


_OFF6 = np.arange(-2, 4)


def _rows_at_j_6pt(f: CylinderDensity, j: np.ndarray) -> np.ndarray:
    """f(phi_grid, j) for off-grid j via a 6-point Lagrange stencil.

    The m = 0 slice divides by |nu|, amplifying J-interpolation error, so
    this one path uses a quintic stencil (O(h^6)); phi stays on grid nodes.
    Outside the J support the rows are zero.
    """
    jax = f.j_axis
    u = (j - jax.start) / jax.step
    base = np.clip(np.floor(u).astype(np.int64), 2, jax.count - 4)
    t = u - base
    idx = base[..., None] + _OFF6
    w = np.ones(t.shape + (6,))
    for a, oa in enumerate(_OFF6):
        for ob in _OFF6:
            if ob != oa:
                w[..., a] *= (t - ob) / (oa - ob)
    inside = (u >= 0.0) & (u <= jax.count - 1.0)
    w = w * inside[..., None]
    rows = np.zeros(t.shape + (f.phi_axis.count,))
    for a in range(6):
        rows += w[..., a, None] * f.values[:, idx[..., a]].swapaxes(0, -1)
    return rows


def _m0_slice(f: CylinderDensity, X: np.ndarray, nu: float):
    # (1/|nu|) int_S1 f(phi, X/nu) dphi, spectrally accurate in phi
    rows = _rows_at_j_6pt(f, X / nu)
    return rows.mean(axis=-1) * TWO_PI / abs(nu)


def _cubic_slope_weights(tau: np.ndarray) -> np.ndarray:
    """d/dtau of the cubic Lagrange basis on nodes tau = 0, 1, 2, 3."""
    w = np.empty(tau.shape + (4,))
    w[..., 0] = -(3.0 * tau * tau - 12.0 * tau + 11.0) / 6.0
    w[..., 1] = (3.0 * tau * tau - 10.0 * tau + 6.0) / 2.0
    w[..., 2] = -(3.0 * tau * tau - 8.0 * tau + 3.0) / 2.0
    w[..., 3] = (3.0 * tau * tau - 6.0 * tau + 2.0) / 6.0
    return w


def _window_quad_batch(f: CylinderDensity, X, lo, hi, m: float, nu: float,
                       stride: int):
    """Batched integral of f((X - nu u)/m, u) du over per-X windows [lo, hi].

    Interior nodes are strided J-grid columns; the exact endpoints are
    appended, making the first and last cells irregular.  The trapezoid sum
    then carries Euler-Maclaurin jump terms at four points - the endpoints
    (weight d^2/12) and the first/last interior nodes (weight (H^2-d^2)/12)
    - all removed here with cubic-stencil slope estimates, so the rule is
    fourth order and the jump terms telescope across abutting windows.
    Windows too narrow for the vector path fall back to a dense local rule.
    """
    jax = f.j_axis
    sh = jax.step * stride
    out = np.zeros(X.shape)
    active = hi - lo > 1e-14
    if not active.any():
        return out
    Xa, loa, hia = X[active], lo[active], hi[active]

    k0 = np.ceil((loa - jax.start) / sh - 1e-12).astype(np.int64)
    k0 = np.where(jax.start + k0 * sh <= loa + 1e-13, k0 + 1, k0)
    k1 = np.floor((hia - jax.start) / sh + 1e-12).astype(np.int64)
    k1 = np.where(jax.start + k1 * sh >= hia - 1e-13, k1 - 1, k1)
    n_int = k1 - k0 + 1
    vals = np.zeros(Xa.shape)

    wide = n_int >= 4
    if wide.any():
        Xw, low, hiw = Xa[wide], loa[wide], hia[wide]
        k0w, n_w = k0[wide], n_int[wide]
        nmax = int(n_w.max())
        j = np.arange(nmax)
        valid = j[None, :] < n_w[:, None]
        kcols = (k0w[:, None] + j[None, :]) * stride
        kcols = np.clip(kcols, 0, jax.count - 1)  # invalid tail parked
        u = jax.start + kcols * jax.step
        F = _eval_at_columns(f, (Xw[:, None] - nu * u) / m, kcols)
        F = np.where(valid, F, 0.0)
        F_lo = grid_eval_2d(f.values, f.phi_axis, jax, (Xw - nu * low) / m, low)
        F_hi = grid_eval_2d(f.values, f.phi_axis, jax, (Xw - nu * hiw) / m, hiw)
        u_first = jax.start + k0w * sh
        u_last = jax.start + (k0w + n_w - 1) * sh
        d0 = u_first - low
        d1 = hiw - u_last
        W = np.where(valid, sh, 0.0)
        W[:, 0] += (d0 - sh) / 2.0
        last = (j[None, :] == (n_w - 1)[:, None])
        W += np.where(last, ((d1 - sh) / 2.0)[:, None], 0.0)
        T = (W * F).sum(axis=-1) + 0.5 * d0 * F_lo + 0.5 * d1 * F_hi
        # slopes from the four outermost interior nodes on each side
        FL = F[:, :4]
        idx_r = (n_w - 1)[:, None] - np.arange(4)[None, :]
        FR = np.take_along_axis(F, idx_r, axis=-1)
        wl_end = _cubic_slope_weights(-d0 / sh)
        wl_node = _cubic_slope_weights(np.zeros_like(d0))
        g_lo = (wl_end * FL).sum(axis=-1) / sh
        g_first = (wl_node * FL).sum(axis=-1) / sh
        g_hi = -(_cubic_slope_weights(-d1 / sh) * FR).sum(axis=-1) / sh
        g_last = -(wl_node * FR).sum(axis=-1) / sh
        vals[wide] = (T
                      + (d0 * d0 / 12.0) * g_lo
                      + ((sh * sh - d0 * d0) / 12.0) * g_first
                      - ((sh * sh - d1 * d1) / 12.0) * g_last
                      - (d1 * d1 / 12.0) * g_hi)

    narrow = ~wide
    if narrow.any():
        for idx in np.flatnonzero(narrow):
            u = np.linspace(loa[idx], hia[idx], 9)
            g = grid_eval_2d(f.values, f.phi_axis, jax, (Xa[idx] - nu * u) / m, u)
            vals[idx] = corrected_trapezoid(g, u)

    out[active] = vals
    return out


def strip_tomogram(f: CylinderDensity, X, m: int, nu: float, alpha: float = 0.0,
                   cfg: QuadratureConfig = DEFAULT_CONFIG, stride: int | None = None):
    """omega^(alpha)(X, m, nu): tomogram over the strip I_alpha x R.

    Scalar or array X.  The delta is reduced to a 1-D integral: for nu != 0
    over the u-window between (X - m alpha)/nu and (X - m(alpha+2pi))/nu
    clipped to the J grid, for nu = 0 (m != 0) over J at the fixed angle
    X/m when it lies inside the literal interval.
    """
    if m == 0 and nu == 0.0:
        raise ValueError("(m, nu) = (0, 0) is degenerate")
    Xa, scalar = _as_batch(X)
    if m == 0:
        out = _m0_slice(f, Xa, nu)
    elif nu == 0.0:
        out = _strip_slice_nu0(f, Xa, m, alpha)
    else:
        e1 = (Xa - m * alpha) / nu
        e2 = (Xa - m * (alpha + TWO_PI)) / nu
        lo = np.maximum(np.minimum(e1, e2), f.j_axis.start)
        hi = np.minimum(np.maximum(e1, e2), f.j_axis.last)
        s = stride if stride is not None else 1
        out = _window_quad_batch(f, Xa, lo, hi, m, nu, s) / abs(m)
    return float(out[0]) if scalar else out


def helix_tomogram(f: CylinderDensity, X, m: int, nu: float,
                   cfg: QuadratureConfig = DEFAULT_CONFIG,
                   phi_origin: float = 0.0, stride: int | None = None):
    """omega~(X, m, nu): tomogram over the whole helix (periodic delta).

    For m != 0 the J integral runs over the full momentum grid with f
    evaluated periodically, making the result exactly 2*pi*m-periodic in X.
    phi_origin selects the fundamental phi-interval used when reducing the
    periodic delta; the value is independent of it (the reduction wraps
    angles before evaluation either way).
    """
    if m == 0 and nu == 0.0:
        raise ValueError("(m, nu) = (0, 0) is degenerate")
    Xa, scalar = _as_batch(X)
    if m == 0:
        out = _m0_slice(f, Xa, nu)
    else:
        period = TWO_PI * abs(m)
        Xc = wrap_angle(Xa, period)
        s = stride if stride is not None else _stride(f, _u_scale(f, m, nu))
        jax = f.j_axis
        cols = np.arange(0, jax.count, s)
        u = jax.start + cols * jax.step
        phi_arg = (Xc[:, None] - nu * u[None, :]) / m
        phi_arg = wrap_angle(phi_arg - phi_origin) + phi_origin
        g = _eval_at_columns(f, phi_arg, cols[None, :])
        out = corrected_trapezoid(g, u) / abs(m)
    return float(out[0]) if scalar else out


def gauge_translate(f: CylinderDensity, alpha: float) -> CylinderDensity:
    """tau_alpha f with (tau_alpha f)(phi, J) = f(phi + alpha, J)."""
    return f.translated(alpha)


def strip_to_helix_resum(f: CylinderDensity, X, m: int, nu: float,
                         alpha: float = 0.0, K: int = 8,
                         cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Sum of strip tomograms at X - 2*pi*m*r for r in [-K, K].

    Converges to the helix tomogram as K grows; at m = 0 the relation is
    the identity, so the strip value itself is returned.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    if m == 0:
        return strip_tomogram(f, X, 0, nu, alpha, cfg)
    Xa, scalar = _as_batch(X)
    total = np.zeros(Xa.shape)
    for r in range(-K, K + 1):
        total += strip_tomogram(f, Xa - TWO_PI * m * r, m, nu, alpha, cfg)
    return float(total[0]) if scalar else total


# ---------------------------------------------------------------------------
# X-Fourier integrals of slices


def _slice_meta(sampler, name, default):
    return getattr(sampler, name, default)


def _strip_runs(m: int, nu: float, alpha: float, j_half: float,
                phi_scale: float, j_scale: float, cfg: QuadratureConfig):
    """Uniform X-node runs covering one strip slice's support.

    The slice rises and falls where a u-window edge sweeps the J support:
    two transition zones of width 2|nu| j_half around X = m*alpha and
    X = m(alpha + 2pi), resolved at the edge scale |nu| j_scale, joined by
    an interior run resolved at the phi-sweep scale |m| phi_scale.
    """
    xa = m * alpha
    xb = m * (alpha + TWO_PI)
    x_lo_edge, x_hi_edge = min(xa, xb), max(xa, xb)
    if nu == 0.0:
        width = x_hi_edge - x_lo_edge
        h = min(abs(m) * phi_scale, 24.0) / (2 * cfg.edge_points_per_scale)
        n = max(9, int(math.ceil(width / h)) + 1)
        return [np.linspace(x_lo_edge, x_hi_edge, min(n, 20001))]
    s_edge = abs(nu) * j_scale
    pad = 6.0 * s_edge
    reach = abs(nu) * j_half + pad
    dense_h = min(s_edge, abs(m) * phi_scale) / cfg.edge_points_per_scale
    z1 = (x_lo_edge - reach, x_lo_edge + reach)
    z2 = (x_hi_edge - reach, x_hi_edge + reach)

    def run(lo, hi, h):
        n = max(5, int(math.ceil((hi - lo) / h)) + 1)
        return np.linspace(lo, hi, min(n, 20001))

    if z1[1] >= z2[0] - 4.0 * dense_h:
        return [run(z1[0], z2[1], dense_h)]
    int_h = max(min(abs(m) * phi_scale, 24.0) / (2 * cfg.edge_points_per_scale),
                dense_h)
    gap = z2[0] - z1[1]
    int_h = min(int_h, gap / 4.0)
    return [run(z1[0], z1[1], dense_h),
            run(z1[1], z2[0], int_h),
            run(z2[0], z2[1], dense_h)]


def _m0_fourier(valfn, nu: float, j_half: float, j_scale: float,
                cfg: QuadratureConfig):
    half = abs(nu) * j_half
    h = abs(nu) * j_scale / (2 * cfg.edge_points_per_scale)
    n = max(33, int(math.ceil(2.0 * half / h)) + 1)
    x = np.linspace(-half, half, min(n, 20001))
    return filon_cubic(x, valfn(x))


def strip_fourier_value(valfn, m: int, nu: float, alpha: float = 0.0,
                        j_half: float = 8.0, phi_scale: float = math.inf,
                        j_scale: float = 1.0,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """int_R omega^(alpha)(X, m, nu) e^{iX} dX from slice values alone.

    valfn(X_array) must return the slice values; the node layout is chosen
    from the declared smoothness scales, and each uniform run is integrated
    with the cubic Filon rule (exact in the e^{iX} factor).

    At nu = 0 the slice is a sharp window in X whose excluded edge (the
    half-open end of the angle interval) samples as 0 even though the
    integrand's one-sided limit is finite; periodicity of the underlying
    angle profile makes that limit equal to the included edge's value, so
    the boundary sample is restored from its partner before integrating.
    """
    if m == 0:
        if nu == 0.0:
            raise ValueError("(m, nu) = (0, 0) has no slice")
        return complex(_m0_fourier(valfn, nu, j_half, j_scale, cfg))
    runs = _strip_runs(m, nu, alpha, j_half, phi_scale, j_scale, cfg)
    sizes = [r.size for r in runs]
    vals = valfn(np.concatenate(runs))
    total = 0.0 + 0.0j
    pos = 0
    for x, n in zip(runs, sizes):
        y = vals[pos:pos + n]
        pos += n
        if nu == 0.0:
            y = y.copy()
            if m > 0:
                y[-1] = y[0]
            else:
                y[0] = y[-1]
        total += filon_cubic(x, y)
    return complex(total)


def helix_fourier_value(valfn, m: int, nu: float, j_half: float = 8.0,
                        phi_scale: float = math.inf, j_scale: float = 1.0,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """int_{S_m} omega~(X, m, nu) e^{iX} dX (m = 0: over the real line).

    For m != 0 the slice is smooth and periodic, so uniform sampling with
    the equal-weight rule is spectrally accurate.  The node count follows
    the slice bandwidth: modes decay like a Gaussian of scale
    sqrt((m phi_scale)^2 + (nu j_scale)^2), and the unit-frequency target
    sits at mode |m|, so |m| plus the decay width plus margin suffices
    (never more than the cfg.x_grid_points file default).
    """
    if m == 0:
        if nu == 0.0:
            raise ValueError("(m, nu) = (0, 0) has no slice")
        return complex(_m0_fourier(valfn, nu, j_half, j_scale, cfg))
    period = TWO_PI * abs(m)
    sigma = math.hypot(m * phi_scale, nu * j_scale) if math.isfinite(phi_scale) \
        else math.inf
    extra = 0.0 if not math.isfinite(sigma) else 7.0 * abs(m) / sigma
    n = int(min(max(64, math.ceil(abs(m) + extra) + 16), cfg.x_grid_points))
    x = period * np.arange(n) / n
    vals = valfn(x)
    return complex((vals * np.exp(1j * x)).sum() * period / n)


def fourier_equality_diagnostic(f: CylinderDensity, m: int, nu: float,
                                alpha: float = 0.0,
                                cfg: QuadratureConfig = DEFAULT_CONFIG) -> dict:
    """Both X-Fourier routes for one (m, nu): they must agree.

    The strip integral over the line and the helix integral over S_m are
    equal for every gauge; the absolute difference is returned as a
    diagnostic of the numerics.
    """
    sp, sj = _phi_scale(f), _j_scale(f)
    strip_val = strip_fourier_value(
        lambda X: strip_tomogram(f, X, m, nu, alpha, cfg), m, nu, alpha,
        j_half=f.j_halfwidth, phi_scale=sp, j_scale=sj, cfg=cfg)
    helix_val = helix_fourier_value(
        lambda X: helix_tomogram(f, X, m, nu, cfg), m, nu,
        j_half=f.j_halfwidth, phi_scale=sp, j_scale=sj, cfg=cfg)
    return {"strip": strip_val, "helix": helix_val,
            "absDifference": abs(strip_val - helix_val)}


# ---------------------------------------------------------------------------
# Samplers and inversion


class DensityStripSampler:
    """Forward-evaluating slice source for the strip inverse.

    Computes omega^(alpha)(X, m, nu) on demand from a density, using the
    batched stride policy (8 nodes per variation scale) that the inverse's
    accuracy budget assumes.  Exposes the metadata the inverse needs: the
    gauge, the J half-width, smoothness scales, and the total mass for the
    degenerate (0, 0) Fourier value.
    """

    geometry = "strip"

    def __init__(self, f: CylinderDensity, alpha: float = 0.0,
                 cfg: QuadratureConfig = DEFAULT_CONFIG):
        self.density = f
        self.alpha = alpha
        self.cfg = cfg
        self.j_halfwidth = f.j_halfwidth
        self.phi_scale = _phi_scale(f)
        self.j_scale = _j_scale(f)
        self.total_mass = f.mass()

    def __call__(self, X, m: int, nu: float):
        stride = _stride(self.density, _u_scale(self.density, m, nu))
        return strip_tomogram(self.density, X, m, nu, self.alpha, self.cfg,
                              stride=stride)


class DensityHelixSampler:
    """Forward-evaluating slice source for the helix inverse."""

    geometry = "helix"

    def __init__(self, f: CylinderDensity, cfg: QuadratureConfig = DEFAULT_CONFIG):
        self.density = f
        self.cfg = cfg
        self.j_halfwidth = f.j_halfwidth
        self.phi_scale = _phi_scale(f)
        self.j_scale = _j_scale(f)
        self.total_mass = f.mass()

    def __call__(self, X, m: int, nu: float):
        return helix_tomogram(self.density, X, m, nu, self.cfg)


def _fourier_table(sampler, fourier_fn, cfg: QuadratureConfig):
    """A(m, nu) = X-Fourier of the slice, for m = 0..M over the nu grid.

    Negative m values follow from A(-m, -nu) = conj A(m, nu), which holds
    because slices are real and the (X, m, nu) -> (-X, -m, -nu) reflection
    is exact in the definition.
    """
    M = cfg.mode_truncation
    nu_grid = np.linspace(-cfg.nu_grid_half_width, cfg.nu_grid_half_width,
                          cfg.nu_grid_points)
    j_half = _slice_meta(sampler, "j_halfwidth", 8.0)
    phi_scale = _slice_meta(sampler, "phi_scale", math.inf)
    j_scale = _slice_meta(sampler, "j_scale", 1.0)
    alpha = _slice_meta(sampler, "alpha", 0.0)
    mass = _slice_meta(sampler, "total_mass", None)

    A = np.zeros((M + 1, nu_grid.size), dtype=complex)
    mid = nu_grid.size // 2  # nu = 0 sits at the center of the odd grid
    for mi in range(M + 1):
        for k, nu in enumerate(nu_grid):
            if mi == 0 and k < mid:
                continue  # filled by conjugate symmetry below
            if mi == 0 and nu == 0.0:
                continue  # degenerate point, handled from the mass
            valfn = lambda X: sampler(X, mi, nu)
            A[mi, k] = fourier_fn(valfn, mi, nu, alpha, j_half, phi_scale,
                                  j_scale, cfg)
        if mi == 0:
            A[0, :mid] = np.conj(A[0, :mid:-1])
    if mass is None:
        # no density behind the sampler: average the two neighbors
        A[0, mid] = 0.5 * (A[0, mid - 1] + A[0, mid + 1]).real
        warnings.warn("A(0, 0) estimated from neighboring nu nodes; supply "
                      "total_mass for the exact value", AccuracyWarning)
    else:
        A[0, mid] = mass
    return A, nu_grid


def _strip_fourier_adapter(valfn, m, nu, alpha, j_half, phi_scale, j_scale, cfg):
    return strip_fourier_value(valfn, m, nu, alpha, j_half, phi_scale,
                               j_scale, cfg)


def _helix_fourier_adapter(valfn, m, nu, alpha, j_half, phi_scale, j_scale, cfg):
    return helix_fourier_value(valfn, m, nu, j_half, phi_scale, j_scale, cfg)


def _synthesize(A: np.ndarray, nu_grid: np.ndarray, phi, j):
    """f(phi, J) = (1/4 pi^2) sum_m e^{-im phi} int A(m, nu) e^{-i nu J} d nu."""
    phi_a, scalar = _as_batch(phi)
    j_a, _ = _as_batch(j)
    phi_a, j_a = np.broadcast_arrays(phi_a, j_a)
    shape = phi_a.shape
    phi_f = phi_a.reshape(-1)
    j_f = j_a.reshape(-1)
    dnu = nu_grid[1] - nu_grid[0]
    weights = np.full(nu_grid.size, dnu)
    weights[0] = weights[-1] = 0.5 * dnu  # trapezoid ends
    WA = A * weights  # (m, nu)
    total = np.empty(phi_f.size)
    chunk = 8192
    for s in range(0, phi_f.size, chunk):
        jc = j_f[s:s + chunk]
        pc = phi_f[s:s + chunk]
        I = np.exp(-1j * np.outer(jc, nu_grid)) @ WA.T  # (chunk, m)
        acc = I[:, 0].real.copy()
        for mi in range(1, A.shape[0]):
            acc += 2.0 * (np.exp(-1j * mi * pc) * I[:, mi]).real
        total[s:s + chunk] = acc
    total /= (TWO_PI * TWO_PI)
    out = total.reshape(shape)
    return float(out.reshape(-1)[0]) if scalar and out.size == 1 else out


def circle_inverse_strip(sampler, phi, j, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Reconstruct f(phi, J) from strip tomogram slices.

    sampler(X, m, nu) -> slice values at fixed gauge (sampler.alpha, default
    0).  Truncation: |m| <= cfg.mode_truncation, nu on the cfg grid; the
    negative-m half of the sum is folded in through conjugate symmetry of
    real slices.  Returns the real part of the synthesis.
    """
    A, nu_grid = _fourier_table(sampler, _strip_fourier_adapter, cfg)
    return _synthesize(A, nu_grid, phi, j)


def circle_inverse_helix(sampler, phi, j, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Reconstruct f(phi, J) from helix tomogram slices (X over S_m)."""
    A, nu_grid = _fourier_table(sampler, _helix_fourier_adapter, cfg)
    return _synthesize(A, nu_grid, phi, j)


# ---------------------------------------------------------------------------
# Helix geometry chart


def helix_params_from_tomogram(m: int, nu: float, X: float) -> HelixParams:
    """Map the line set X = m phi + nu J to (theta, intercept, shift).

    tan(theta) = -m/nu with theta in (-pi, 0); the intercept is X/m wrapped
    into [0, 2*pi).  m = 0 (circles, theta -> 0) and nu = 0 (vertical
    fibers) lie outside the chart.
    """
    if m == 0:
        raise ValueError("m = 0 describes circles, not helices; out of chart")
    if nu == 0.0:
        raise ValueError("nu = 0 describes vertical fibers; out of chart")
    t = math.atan(-m / nu)
    theta = t if t < 0.0 else t - math.pi
    intercept = wrap_angle(X / m)
    return HelixParams(theta, intercept, (TWO_PI - intercept) * math.tan(theta))


def helix_params_to_tomogram(params: HelixParams, m: int) -> tuple[int, float, float]:
    """Inverse chart: recover (m, nu, X mod 2*pi*m) given the winding m."""
    if m == 0:
        raise ValueError("m = 0 is out of the helix chart")
    nu = -m / math.tan(params.theta)
    return m, nu, m * params.intercept
