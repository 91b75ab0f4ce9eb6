"""Uniform grid axes and angle wrapping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

__all__ = ["GridAxis", "wrap_angle", "TWO_PI"]


def wrap_angle(x, period: float = TWO_PI):
    """Reduce x into the half-open interval [0, period).

    Works on scalars and arrays. The right endpoint maps to 0, and values
    that round up to `period` after the modulo are folded back so the
    result is always strictly below `period`.
    """
    if period <= 0:
        raise ValueError(f"period must be positive, got {period}")
    x = np.asarray(x, dtype=float)
    out = np.mod(x, period)
    out = np.where(out >= period, out - period, out)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class GridAxis:
    """Uniform 1-D sampling axis.

    Points sit at start + step*k for k = 0 .. count-1.  A periodic axis
    covers one fundamental period of length step*count, so the implicit
    point start + step*count coincides with start.  A non-periodic axis
    spans the closed interval [start, start + step*(count-1)].
    """

    start: float
    step: float
    count: int
    periodic: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.count < 2:
            raise ValueError(f"count must be at least 2, got {self.count}")

    @property
    def last(self) -> float:
        return self.start + self.step * (self.count - 1)

    @property
    def period(self) -> float:
        if not self.periodic:
            raise ValueError("period is only defined for periodic axes")
        return self.step * self.count

    @property
    def span(self) -> float:
        """Length of the covered interval (one period if periodic)."""
        if self.periodic:
            return self.step * self.count
        return self.step * (self.count - 1)

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @staticmethod
    def linspace(lo: float, hi: float, count: int, periodic: bool = False) -> "GridAxis":
        """Axis over [lo, hi]; for periodic axes hi is the excluded period end."""
        if count < 2:
            raise ValueError(f"count must be at least 2, got {count}")
        if not hi > lo:
            raise ValueError(f"need hi > lo, got [{lo}, {hi}]")
        if periodic:
            return GridAxis(lo, (hi - lo) / count, count, periodic=True)
        return GridAxis(lo, (hi - lo) / (count - 1), count, periodic=False)

    @staticmethod
    def angle_axis(count: int, start: float = 0.0) -> "GridAxis":
        """Periodic axis covering [start, start + 2*pi)."""
        return GridAxis(start, TWO_PI / count, count, periodic=True)
