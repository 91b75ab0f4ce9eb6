"""Quadrature primitives used by the transforms.

Three rules cover everything here:

* periodic trapezoid (equal weights over one period) - spectrally accurate
  for smooth periodic integrands;
* composite trapezoid with an optional Euler-Maclaurin endpoint correction
  -(h^2/12)[g'(b) - g'(a)] for integrands cut off at window edges;
* Filon-type rules for oscillatory integrals of sampled data,
  int y(X) e^{iX} dX, integrating a piecewise interpolant of y against
  e^{iX} exactly, so the grid only has to resolve y itself and never the
  unit-frequency oscillation.  filon_unit models y segment-wise linearly
  (any node spacing); filon_cubic models it with the local cubic through
  four neighboring nodes (uniform runs, O(h^4) in the resolution of y).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "periodic_trapezoid",
    "trapezoid",
    "corrected_trapezoid",
    "window_nodes",
    "filon_unit",
    "filon_cubic",
    "piecewise_nodes",
]


def periodic_trapezoid(values: np.ndarray, period: float, axis: int = -1):
    """Integral over one period from equally spaced samples (no endpoint dup)."""
    values = np.asarray(values)
    return values.mean(axis=axis) * period


def trapezoid(y: np.ndarray, x: np.ndarray, axis: int = -1):
    return np.trapezoid(y, x, axis=axis)


def _edge_slope(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Second-order derivative estimate at x[0] from the first three nodes.

    Works for non-uniform spacing; y may carry leading batch dimensions with
    nodes on the last axis.
    """
    x0, x1, x2 = x[..., 0], x[..., 1], x[..., 2]
    y0, y1, y2 = y[..., 0], y[..., 1], y[..., 2]
    d01 = x0 - x1
    d02 = x0 - x2
    d12 = x1 - x2
    return (y0 * (d01 + d02) / (d01 * d02)
            - y1 * d02 / (d01 * d12)
            + y2 * d01 / (d02 * d12))


def corrected_trapezoid(y: np.ndarray, x: np.ndarray):
    """Composite trapezoid plus the h^2/12 endpoint-derivative correction.

    The correction removes the leading Euler-Maclaurin term when the
    integrand does not vanish at the window edges (hard cutoffs).  The edge
    slope is estimated from the outermost three nodes, so the rule stays
    O(h^4) without analytic derivatives.
    """
    x = np.asarray(x, float)
    y = np.asarray(y)
    if x.shape[-1] < 3:
        return np.trapezoid(y, x, axis=-1)
    base = np.trapezoid(y, x, axis=-1)
    ga = _edge_slope(x, y)
    gb = _edge_slope(x[..., ::-1], y[..., ::-1])
    ha = x[..., 1] - x[..., 0]
    hb = x[..., -1] - x[..., -2]
    return base + (ha * ha / 12.0) * ga - (hb * hb / 12.0) * gb


def window_nodes(lo: float, hi: float, axis_start: float, axis_step: float,
                 stride: int = 1, min_interior: int = 4) -> np.ndarray:
    """Quadrature nodes over [lo, hi] aligned to an existing uniform grid.

    Interior nodes coincide with grid nodes (every `stride`-th), so sampled
    data is hit exactly at stored values; the exact window endpoints are
    appended.  Alignment keeps the trapezoid sum equal to the trapezoid rule
    of the *true* grid data, avoiding interpolation bias inside the window.
    """
    if not hi > lo:
        return np.array([lo, hi]) if hi == lo else np.empty(0)
    step = axis_step * stride
    k_lo = int(np.ceil((lo - axis_start) / step - 1e-12))
    k_hi = int(np.floor((hi - axis_start) / step + 1e-12))
    inner = axis_start + step * np.arange(k_lo, k_hi + 1)
    inner = inner[(inner > lo) & (inner < hi)]
    if inner.size < min_interior:
        return np.linspace(lo, hi, max(min_interior, 8))
    return np.concatenate(([lo], inner, [hi]))


def piecewise_nodes(segments: list[tuple[float, float, float]]) -> np.ndarray:
    """Sorted unique nodes from (lo, hi, step) segments (step = target spacing)."""
    parts = []
    for lo, hi, step in segments:
        if hi <= lo:
            continue
        n = max(2, int(np.ceil((hi - lo) / step)) + 1)
        parts.append(np.linspace(lo, hi, n))
    if not parts:
        return np.empty(0)
    nodes = np.unique(np.concatenate(parts))
    keep = np.empty(nodes.shape, dtype=bool)
    keep[0] = True
    np.greater(np.diff(nodes), 1e-12 * max(1.0, abs(nodes[-1]), abs(nodes[0])),
               out=keep[1:])
    return nodes[keep]


def _poly_moments(delta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(int_0^d e^{it} dt, int_0^d t e^{it} dt) stable for small d."""
    delta = np.asarray(delta, float)
    small = np.abs(delta) < 1e-3
    d = np.where(small, 1.0, delta)  # placeholder to avoid 0/0; small branch below
    eid = np.exp(1j * d)
    m0 = (eid - 1.0) / 1j
    # antiderivative of t e^{it} is e^{it}(1 - it), so m1 = e^{id}(1-id) - 1
    m1 = eid * (1.0 - 1j * d) - 1.0
    if np.any(small):
        ds = delta[small]
        m0s = ds + 1j * ds**2 / 2.0 - ds**3 / 6.0 - 1j * ds**4 / 24.0
        m1s = ds**2 / 2.0 + 1j * ds**3 / 3.0 - ds**4 / 8.0 - 1j * ds**5 / 30.0
        m0 = np.array(m0, complex)
        m1 = np.array(m1, complex)
        m0[small] = m0s
        m1[small] = m1s
    return m0, m1


def filon_unit(x: np.ndarray, y: np.ndarray) -> complex | np.ndarray:
    """int y(X) e^{iX} dX for sampled y, piecewise-linear in X.

    Nodes may be non-uniform; y may carry leading batch dimensions with the
    node axis last.  Each segment integrates (y_a + s t) e^{i(a+t)} exactly,
    so accuracy is set by how well the nodes resolve y, independent of the
    e^{iX} oscillation.
    """
    x = np.asarray(x, float)
    y = np.asarray(y)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError("x and y must share the node axis")
    a = x[..., :-1]
    delta = np.diff(x, axis=-1)
    ya = y[..., :-1]
    slope = np.diff(y, axis=-1) / delta
    m0, m1 = _poly_moments(delta)
    seg = np.exp(1j * a) * (ya * m0 + slope * m1)
    return seg.sum(axis=-1)


def _unit_moments(h: float) -> np.ndarray:
    """mu_k = int_0^1 t^k e^{iht} dt for k = 0..3."""
    if abs(h) < 0.8:
        mu = np.zeros(4, complex)
        term = np.ones(4, complex)  # (ih)^j / j! at j = 0
        for j in range(24):
            mu += term / (np.arange(4) + j + 1.0)
            term = term * (1j * h) / (j + 1.0)
        return mu
    eih = np.exp(1j * h)
    mu = np.empty(4, complex)
    mu[0] = (eih - 1.0) / (1j * h)
    for k in range(1, 4):
        mu[k] = (-1j * eih + 1j * k * mu[k - 1]) / h
    return mu


def _stencil_matrix(offsets: tuple[int, ...]) -> np.ndarray:
    """B[a, k]: monomial coefficients of the Lagrange basis over `offsets`."""
    from numpy.polynomial import polynomial as P
    B = np.empty((4, 4))
    for a, oa in enumerate(offsets):
        others = [ob for ob in offsets if ob != oa]
        denom = np.prod([oa - ob for ob in others])
        B[a] = P.polyfromroots(others) / denom
    return B


_B_INTERIOR = _stencil_matrix((-1, 0, 1, 2))
_B_FIRST = _stencil_matrix((0, 1, 2, 3))
_B_LAST = _stencil_matrix((-2, -1, 0, 1))


def filon_cubic(x: np.ndarray, y: np.ndarray) -> complex | np.ndarray:
    """int y(X) e^{iX} dX over a uniform run, cubic-accurate in the spacing.

    Per segment, y is modeled by the Lagrange cubic through the four
    surrounding nodes (one-sided at the run ends) and integrated against
    e^{iX} exactly, giving O(h^4) error in how well the nodes resolve y.
    x must be uniformly spaced; y may carry leading batch dimensions with
    the node axis last.  Runs shorter than four nodes fall back to the
    linear rule.
    """
    x = np.asarray(x, float)
    y = np.asarray(y)
    n = x.shape[-1]
    if x.ndim != 1:
        raise ValueError("filon_cubic expects a single 1-D node run")
    if y.shape[-1] != n:
        raise ValueError("x and y must share the node axis")
    if n < 4:
        return filon_unit(x, y)
    h = (x[-1] - x[0]) / (n - 1)
    if np.max(np.abs(np.diff(x) - h)) > 1e-9 * max(abs(h), 1.0):
        raise ValueError("filon_cubic requires uniform spacing")
    mu = _unit_moments(h)
    c_int = _B_INTERIOR @ mu
    c_first = _B_FIRST @ mu
    c_last = _B_LAST @ mu
    phase = np.exp(1j * x[:-1])
    total = phase[0] * sum(c_first[a] * y[..., a] for a in range(4))
    total = total + phase[-1] * sum(c_last[a] * y[..., n - 4 + a] for a in range(4))
    if n > 4:
        k = n - 3  # interior segment count
        acc = c_int[0] * y[..., 0:k]
        for a in range(1, 4):
            acc = acc + c_int[a] * y[..., a:a + k]
        total = total + (acc * phase[1:n - 2]).sum(axis=-1)
    elif n == 4:
        total = total + phase[1] * sum(c_int[a] * y[..., a] for a in range(4))
    return h * total
