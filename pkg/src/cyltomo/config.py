"""Quadrature configuration and accuracy warnings."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

__all__ = ["QuadratureConfig", "AccuracyWarning", "thread_cap", "THREADS_ENV"]

THREADS_ENV = "CYLTOMO_THREADS"


class AccuracyWarning(UserWarning):
    """Raised (as a warning) when a result is likely under-resolved.

    Emitted instead of failing so callers can decide; the CLI collects these
    into report metadata and, under --strict, converts them to exit code 2.
    """


def thread_cap() -> int:
    """Parallelism cap from the CYLTOMO_THREADS environment variable."""
    raw = os.environ.get(THREADS_ENV, "")
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and grid resolutions shared by the transforms.

    The first block is the published contract; the second block pins
    internal discretizations so results are reproducible run to run.
    """

    mass_tol: float = 1e-8
    tail_tol: float = 1e-10
    quad_points_per_cell: int = 1
    mode_truncation: int = 32        # inverse series truncated at |m| <= M
    nu_grid_half_width: float = 6.0
    nu_grid_points: int = 241
    x_grid_points: int = 481
    reg_epsilon: float = 1e-2        # classical inversion r-cutoff

    # internal discretization knobs
    x_half_width: float = 16.0       # plane-slice X box half-width
    mu_grid_points: int = 121        # plane inverse mu-grid
    r_grid_points: int = 400         # classical inversion r-grid
    r_max: float = 8.0
    polar_eta: float = 1e-4          # polar-mode radial taper exp(-eta r^2)
    polar_r_max: float = 40.0
    wrap_images: int = 4             # truncated image sum for wrapped densities
    edge_points_per_scale: int = 12  # oscillatory-quadrature nodes per scale
    line_points_per_scale: int = 4   # smooth line-quadrature nodes per scale
    line_quad_points: int = 1024     # non-grid-aligned line quadratures

    def __post_init__(self):
        for name in ("mass_tol", "tail_tol", "nu_grid_half_width", "reg_epsilon",
                     "x_half_width", "r_max", "polar_eta", "polar_r_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("quad_points_per_cell", "mode_truncation", "nu_grid_points",
                     "x_grid_points", "mu_grid_points", "r_grid_points",
                     "wrap_images", "edge_points_per_scale",
                     "line_points_per_scale", "line_quad_points"):
            val = getattr(self, name)
            if not isinstance(val, int) or val < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {val!r}")
        if self.nu_grid_points < 3 or self.x_grid_points < 3:
            raise ValueError("nu_grid_points and x_grid_points must be >= 3")

    def replace(self, **kwargs) -> "QuadratureConfig":
        return dataclasses.replace(self, **kwargs)


DEFAULT_CONFIG = QuadratureConfig()
__all__.append("DEFAULT_CONFIG")
