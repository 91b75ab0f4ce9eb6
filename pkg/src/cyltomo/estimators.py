"""Estimator-style front end: fit a density once, transform parameter rows.

Thin wrappers over the functional transforms with the scikit-learn
calling convention (fit / transform / predict / inverse_transform,
get_params round trip, clone-compatible constructors).  transform
consumes one parameter row per output value and groups rows that share
transform parameters so batched X sweeps stay vectorized.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .circle import (
    DensityHelixSampler,
    DensityStripSampler,
    circle_inverse_helix,
    circle_inverse_strip,
    helix_tomogram,
    strip_tomogram,
)
from .config import DEFAULT_CONFIG, QuadratureConfig
from .densities import CylinderDensity, PlaneDensity, TorusDensity
from .plane import PlaneSliceSampler, plane_inverse, plane_tomogram
from .torus import TorusTomogramParams, torus_inverse, torus_tomogram

__all__ = ["PlaneTomography", "CylinderTomography", "TorusTomography"]


def _rows(P, n_cols: int, name: str) -> np.ndarray:
    """Validated (n, n_cols) float matrix; one row per evaluation."""
    P = check_array(P, dtype=float, ensure_2d=True)
    if P.shape[1] != n_cols:
        raise ValueError(f"{name} expects {n_cols} columns, got {P.shape[1]}")
    return P


def _integer_column(col: np.ndarray, name: str) -> np.ndarray:
    if not np.array_equal(col, np.rint(col)):
        raise ValueError(f"{name} column must hold integers")
    return col.astype(int)


def _grouped(keys: np.ndarray, X: np.ndarray, evaluate) -> np.ndarray:
    """Evaluate per unique parameter tuple, batching the X values."""
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    out = np.empty(len(X))
    for g, key in enumerate(uniq):
        mask = inverse == g
        out[mask] = evaluate(X[mask], key)
    return out


class PlaneTomography(BaseEstimator):
    """Symplectic tomography of a fitted plane density.

    transform rows are (X, mu, nu); inverse_transform rows are (q, p)
    and run the Fourier inverse against exact forward slices of the
    fitted density.
    """

    def __init__(self, cfg: QuadratureConfig | None = None,
                 inverse_mode: str = "cartesian"):
        self.cfg = cfg
        self.inverse_mode = inverse_mode

    def _config(self) -> QuadratureConfig:
        return self.cfg if self.cfg is not None else DEFAULT_CONFIG

    def fit(self, density: PlaneDensity, y=None):
        if not isinstance(density, PlaneDensity):
            raise TypeError(f"expected a PlaneDensity, got {type(density).__name__}")
        self.density_ = density
        return self

    def transform(self, P):
        check_is_fitted(self)
        P = _rows(P, 3, "plane parameter rows (X, mu, nu)")
        return _grouped(P[:, 1:], P[:, 0],
                        lambda X, key: plane_tomogram(self.density_, X,
                                                      key[0], key[1],
                                                      self._config()))

    def predict(self, P):
        return self.transform(P)

    def inverse_transform(self, Q):
        check_is_fitted(self)
        Q = _rows(Q, 2, "phase-space rows (q, p)")
        sampler = PlaneSliceSampler(self.density_, self._config())
        return np.asarray(plane_inverse(sampler, Q[:, 0], Q[:, 1],
                                        self._config(), mode=self.inverse_mode))


class CylinderTomography(BaseEstimator):
    """Strip or helix tomography of a fitted cylinder density.

    variant selects the family: "strip" uses the gauge alpha and rows
    (X, m, nu); "helix" ignores alpha and uses the same row layout.
    inverse_transform rows are (phi, J).
    """

    def __init__(self, variant: str = "strip", alpha: float = 0.0,
                 cfg: QuadratureConfig | None = None):
        self.variant = variant
        self.alpha = alpha
        self.cfg = cfg

    def _config(self) -> QuadratureConfig:
        return self.cfg if self.cfg is not None else DEFAULT_CONFIG

    def fit(self, density: CylinderDensity, y=None):
        if self.variant not in ("strip", "helix"):
            raise ValueError(f"variant must be 'strip' or 'helix', "
                             f"got {self.variant!r}")
        if not isinstance(density, CylinderDensity):
            raise TypeError(f"expected a CylinderDensity, got {type(density).__name__}")
        self.density_ = density
        return self

    def transform(self, P):
        check_is_fitted(self)
        P = _rows(P, 3, "cylinder parameter rows (X, m, nu)")
        _integer_column(P[:, 1], "m")

        def evaluate(X, key):
            m, nu = int(key[0]), float(key[1])
            if self.variant == "strip":
                return strip_tomogram(self.density_, X, m, nu, self.alpha,
                                      self._config())
            return helix_tomogram(self.density_, X, m, nu, self._config())

        return _grouped(P[:, 1:], P[:, 0], evaluate)

    def predict(self, P):
        return self.transform(P)

    def inverse_transform(self, Q):
        check_is_fitted(self)
        Q = _rows(Q, 2, "cylinder rows (phi, J)")
        if self.variant == "strip":
            sampler = DensityStripSampler(self.density_, self.alpha,
                                          self._config())
            return np.asarray(circle_inverse_strip(sampler, Q[:, 0], Q[:, 1],
                                                   self._config()))
        sampler = DensityHelixSampler(self.density_, self._config())
        return np.asarray(circle_inverse_helix(sampler, Q[:, 0], Q[:, 1],
                                               self._config()))


class TorusTomography(BaseEstimator):
    """Component-diagonal torus tomography at fixed (m, nu[, alpha]).

    The parameter vectors are estimator parameters; transform rows are
    X vectors (one column per component).  inverse_transform rows
    interleave coordinates as (phi_1, J_1, ..., phi_N, J_N) and need a
    product-form density.
    """

    def __init__(self, m=(1,), nu=(1.0,), alpha=None,
                 cfg: QuadratureConfig | None = None):
        self.m = m
        self.nu = nu
        self.alpha = alpha
        self.cfg = cfg

    def _config(self) -> QuadratureConfig:
        return self.cfg if self.cfg is not None else DEFAULT_CONFIG

    def _params(self) -> TorusTomogramParams:
        return TorusTomogramParams(self.m, self.nu, self.alpha)

    def fit(self, density: TorusDensity, y=None):
        params = self._params()
        if not isinstance(density, TorusDensity):
            raise TypeError(f"expected a TorusDensity, got {type(density).__name__}")
        if density.n_components != params.n_components:
            raise ValueError(f"density has {density.n_components} components, "
                             f"parameters have {params.n_components}")
        self.density_ = density
        return self

    def transform(self, P):
        check_is_fitted(self)
        params = self._params()
        P = _rows(P, params.n_components, "torus X rows")
        return np.array([torus_tomogram(self.density_, row, params,
                                        self._config())
                         for row in P])

    def predict(self, P):
        return self.transform(P)

    def inverse_transform(self, Q):
        check_is_fitted(self)
        params = self._params()
        if self.density_.factors is None:
            raise ValueError("inverse_transform needs a product-form density")
        Q = _rows(Q, 2 * params.n_components,
                  "torus rows (phi_1, J_1, ..., phi_N, J_N)")
        samplers = []
        for k, factor in enumerate(self.density_.factors):
            if params.alpha is None:
                samplers.append(DensityHelixSampler(factor, self._config()))
            else:
                samplers.append(DensityStripSampler(factor, params.alpha[k],
                                                    self._config()))
        phis = [Q[:, 2 * k] for k in range(params.n_components)]
        js = [Q[:, 2 * k + 1] for k in range(params.n_components)]
        return np.asarray(torus_inverse(samplers, phis, js, self._config()))
