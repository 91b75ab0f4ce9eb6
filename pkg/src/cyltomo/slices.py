"""Tomogram slices as data, plus the on-disk formats.

A slice is a 1-D sweep of a tomogram over X at fixed parameters, tagged
with its geometry.  Files carry a one-line JSON header followed by a CSV
body; all numbers are written with 17 significant digits so reading a
file back reproduces every double bit for bit.

Torus runs emit one slice file per component: each body is the 1-D
tomogram of that cylinder factor (so it integrates to 1 on its own) and
the header records the full parameter vectors of the run.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circle import helix_tomogram, strip_tomogram
from .config import DEFAULT_CONFIG, QuadratureConfig
from .densities import CylinderDensity, PlaneDensity, TorusDensity
from .grid import GridAxis, TWO_PI, wrap_angle
from .plane import plane_tomogram
from .torus import TorusTomogramParams

__all__ = [
    "TomogramSlice",
    "plane_slice",
    "strip_slice",
    "helix_slice",
    "torus_component_slices",
    "slice_to_text",
    "parse_slice_text",
    "write_slice",
    "read_slice",
    "density_to_text",
    "parse_density_text",
    "write_density",
    "read_density",
    "config_to_header",
    "config_from_header",
]

SLICE_FORMAT = "cyltomo-slice"
DENSITY_FORMAT = "cyltomo-density"
FORMAT_VERSION = 1

_PARAM_KEYS = {
    "plane": ("mu", "nu"),
    "strip": ("m", "nu", "alpha"),
    "helix": ("m", "nu", "period"),
    "torus": ("n", "m", "nu", "alpha", "component"),
}


def _fmt(x: float) -> str:
    """17 significant digits: the shortest width that is always lossless."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class TomogramSlice:
    """Values of one tomogram over an X grid, tagged with its parameters.

    params holds exactly the keys for the geometry: plane (mu, nu),
    strip (m, nu, alpha), helix (m, nu, period; period is None on the
    m = 0 line), torus (n, m, nu, alpha, component with the vector
    parameters of the full run and the swept component index).
    """

    geometry: str
    params: dict
    x_axis: GridAxis
    values: np.ndarray

    def __post_init__(self):
        if self.geometry not in _PARAM_KEYS:
            raise ValueError(f"unknown geometry {self.geometry!r}")
        keys = _PARAM_KEYS[self.geometry]
        if set(self.params) != set(keys):
            raise ValueError(f"{self.geometry} slice params must have keys "
                             f"{sorted(keys)}, got {sorted(self.params)}")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.x_axis.count,):
            raise ValueError(f"values shape {vals.shape} does not match the "
                             f"{self.x_axis.count}-point X axis")
        if not np.all(np.isfinite(vals)):
            raise ValueError("slice values must be finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "params", dict(self.params))

    def integral(self) -> float:
        """Trapezoid integral over X (periodic rule on periodic axes).

        Equals 1 up to quadrature and tail truncation when the slice came
        from a normalized density.
        """
        if self.x_axis.periodic:
            return float(self.values.sum() * self.x_axis.step)
        return float(np.trapezoid(self.values, dx=self.x_axis.step))


def _interval_sum(*segments: tuple[float, float]) -> tuple[float, float]:
    lo = sum(min(a, b) for a, b in segments)
    hi = sum(max(a, b) for a, b in segments)
    return lo, hi


def _support_axis(lo: float, hi: float, count: int) -> GridAxis:
    if not hi > lo:  # nu = 0 and m = 0 never get here (degenerate pair)
        raise ValueError(f"empty X support [{lo}, {hi}]")
    return GridAxis.linspace(lo, hi, count)


def plane_slice(f: PlaneDensity, mu: float, nu: float,
                x_axis: GridAxis | None = None,
                cfg: QuadratureConfig = DEFAULT_CONFIG) -> TomogramSlice:
    """Sweep plane_tomogram over X; the default axis covers mu*q + nu*p."""
    mu = float(mu)
    nu = float(nu)
    if mu == 0.0 and nu == 0.0:
        raise ValueError("(mu, nu) = (0, 0) does not define a line family")
    if x_axis is None:
        lo, hi = _interval_sum((mu * f.q_axis.start, mu * f.q_axis.last),
                               (nu * f.p_axis.start, nu * f.p_axis.last))
        x_axis = _support_axis(lo, hi, cfg.x_grid_points)
    vals = plane_tomogram(f, x_axis.points(), mu, nu, cfg)
    return TomogramSlice("plane", {"mu": mu, "nu": nu}, x_axis, vals)


def strip_slice(f: CylinderDensity, m: int, nu: float, alpha: float = 0.0,
                x_axis: GridAxis | None = None,
                cfg: QuadratureConfig = DEFAULT_CONFIG) -> TomogramSlice:
    """Sweep strip_tomogram over X.

    The default axis covers m*[alpha, alpha+2pi] + nu*[-Jmax, Jmax], the
    exact support of the strip reduction on the truncated grid.
    """
    m = int(m)
    nu = float(nu)
    if m == 0 and nu == 0.0:
        raise ValueError("(m, nu) = (0, 0) is degenerate")
    alpha = float(wrap_angle(alpha))
    if x_axis is None:
        jh = f.j_halfwidth
        lo, hi = _interval_sum((m * alpha, m * (alpha + TWO_PI)),
                               (-abs(nu) * jh, abs(nu) * jh))
        x_axis = _support_axis(lo, hi, cfg.x_grid_points)
    vals = strip_tomogram(f, x_axis.points(), m, nu, alpha, cfg)
    return TomogramSlice("strip", {"m": m, "nu": nu, "alpha": alpha},
                         x_axis, vals)


def helix_slice(f: CylinderDensity, m: int, nu: float,
                x_axis: GridAxis | None = None,
                cfg: QuadratureConfig = DEFAULT_CONFIG) -> TomogramSlice:
    """Sweep helix_tomogram over X.

    For m != 0 the default axis is one full period of the X-circle S_m,
    sampled periodically; the recorded period is 2*pi*|m|.  The m = 0
    slice lives on the line and gets the same support box as the strip.
    """
    m = int(m)
    nu = float(nu)
    if m == 0 and nu == 0.0:
        raise ValueError("(m, nu) = (0, 0) is degenerate")
    if x_axis is None:
        if m != 0:
            period = TWO_PI * abs(m)
            x_axis = GridAxis(0.0, period / cfg.x_grid_points,
                              cfg.x_grid_points, periodic=True)
        else:
            jh = abs(nu) * f.j_halfwidth
            x_axis = _support_axis(-jh, jh, cfg.x_grid_points)
    vals = helix_tomogram(f, x_axis.points(), m, nu, cfg)
    period = TWO_PI * abs(m) if m != 0 else None
    return TomogramSlice("helix", {"m": m, "nu": nu, "period": period},
                         x_axis, vals)


def torus_component_slices(f: TorusDensity, params: TorusTomogramParams,
                           cfg: QuadratureConfig = DEFAULT_CONFIG
                           ) -> list[TomogramSlice]:
    """One slice per component of a product-form torus density.

    Component k sweeps the k-th cylinder factor with (m_k, nu_k) and,
    for the strip variant, alpha_k; every body integrates to 1.  Full
    sample grids have no per-component factorization and are rejected.
    """
    if f.factors is None:
        raise ValueError("component slices need a product-form torus density")
    if f.n_components != params.n_components:
        raise ValueError(f"density has {f.n_components} components, "
                         f"params have {params.n_components}")
    out = []
    for k, factor in enumerate(f.factors):
        if params.alpha is None:
            part = helix_slice(factor, params.m[k], params.nu[k], cfg=cfg)
        else:
            part = strip_slice(factor, params.m[k], params.nu[k],
                               params.alpha[k], cfg=cfg)
        head = {"n": params.n_components,
                "m": list(params.m),
                "nu": list(params.nu),
                "alpha": None if params.alpha is None else list(params.alpha),
                "component": k}
        out.append(TomogramSlice("torus", head, part.x_axis, part.values))
    return out


# -- headers ----------------------------------------------------------------

def _camel(name: str) -> str:
    head, *rest = name.split("_")
    return head + "".join(w.capitalize() for w in rest)


_CONFIG_KEYS = {_camel(f.name): f.name
                for f in dataclasses.fields(QuadratureConfig)}


def config_to_header(cfg: QuadratureConfig) -> dict:
    return {_camel(f.name): getattr(cfg, f.name)
            for f in dataclasses.fields(QuadratureConfig)}


_INT_FIELDS = {f.name for f in dataclasses.fields(QuadratureConfig)
               if f.type == "int"}


def config_from_header(header: dict) -> QuadratureConfig:
    """Rebuild a config from header keys; unknown keys are an error.

    JSON has one number type, so integral fields are coerced back to int
    when the value is a whole number.
    """
    kwargs = {}
    for key, val in header.items():
        if key not in _CONFIG_KEYS:
            raise ValueError(f"unknown config field {key!r}")
        name = _CONFIG_KEYS[key]
        if name in _INT_FIELDS:
            if float(val) != int(val):
                raise ValueError(f"config field {key!r} must be an integer, "
                                 f"got {val!r}")
            val = int(val)
        else:
            val = float(val)
        kwargs[name] = val
    return QuadratureConfig(**kwargs)


def _axis_to_header(axis: GridAxis) -> dict:
    return {"start": axis.start, "step": axis.step,
            "count": axis.count, "periodic": axis.periodic}


def _axis_from_header(d: dict) -> GridAxis:
    return GridAxis(float(d["start"]), float(d["step"]),
                    int(d["count"]), bool(d["periodic"]))


def _dump_header(header: dict) -> str:
    # one line, sorted keys: byte-identical output for identical inputs
    return json.dumps(header, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


# -- slice files ------------------------------------------------------------

def slice_to_text(s: TomogramSlice,
                  cfg: QuadratureConfig = DEFAULT_CONFIG,
                  run: dict | None = None) -> str:
    """Slice file: JSON header line, then (X, value) CSV rows.

    The header embeds the resolved quadrature config so a file is
    self-describing (the verification pass reads massTol from it); run
    carries the full resolved run description when the CLI writes one.
    """
    header = {"format": SLICE_FORMAT, "version": FORMAT_VERSION,
              "geometry": s.geometry, "params": s.params,
              "xAxis": _axis_to_header(s.x_axis),
              "config": config_to_header(cfg)}
    if run is not None:
        header["run"] = run
    lines = [_dump_header(header), "X,value"]
    for x, v in zip(s.x_axis.points(), s.values):
        lines.append(f"{_fmt(x)},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def parse_slice_text(text: str) -> tuple[TomogramSlice, QuadratureConfig]:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError("slice file needs a header line and a column line")
    header = json.loads(lines[0])
    if header.get("format") != SLICE_FORMAT:
        raise ValueError(f"not a slice file (format {header.get('format')!r})")
    axis = _axis_from_header(header["xAxis"])
    body = lines[2:]
    if len(body) != axis.count:
        raise ValueError(f"expected {axis.count} rows, found {len(body)}")
    vals = np.array([float(row.split(",")[1]) for row in body])
    cfg = config_from_header(header.get("config", {}))
    return (TomogramSlice(header["geometry"], header["params"], axis, vals),
            cfg)


def write_slice(s: TomogramSlice, path,
                cfg: QuadratureConfig = DEFAULT_CONFIG) -> None:
    Path(path).write_text(slice_to_text(s, cfg), newline="\n")


def read_slice(path) -> TomogramSlice:
    return parse_slice_text(Path(path).read_text())[0]


# -- density files ----------------------------------------------------------

def _hint_out(h: float):
    return None if math.isinf(h) else h


def _hint_in(h) -> float:
    return math.inf if h is None else float(h)


def density_to_text(d: PlaneDensity | CylinderDensity) -> str:
    """Density file: JSON header line, then row-major CSV values.

    scaleHints uses null for an infinite scale (uniform coordinate),
    keeping the header strict JSON.
    """
    if isinstance(d, PlaneDensity):
        geometry, axes = "plane", (d.q_axis, d.p_axis)
    elif isinstance(d, CylinderDensity):
        geometry, axes = "cylinder", (d.phi_axis, d.j_axis)
    else:
        raise TypeError(f"no density file format for {type(d).__name__}")
    header = {"format": DENSITY_FORMAT, "version": FORMAT_VERSION,
              "geometry": geometry,
              "axes": [_axis_to_header(ax) for ax in axes],
              "tolerances": {"massTol": d.mass_tol, "tailTol": d.tail_tol},
              "scaleHints": [_hint_out(h) for h in d.scale_hints]}
    lines = [_dump_header(header)]
    for row in d.values:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_density_text(text: str) -> PlaneDensity | CylinderDensity:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty density file")
    header = json.loads(lines[0])
    if header.get("format") != DENSITY_FORMAT:
        raise ValueError(f"not a density file (format {header.get('format')!r})")
    axes = [_axis_from_header(d) for d in header["axes"]]
    if len(axes) != 2:
        raise ValueError(f"density files hold 2 axes, found {len(axes)}")
    body = lines[1:]
    if len(body) != axes[0].count:
        raise ValueError(f"expected {axes[0].count} rows, found {len(body)}")
    vals = np.array([[float(tok) for tok in row.split(",")] for row in body])
    tol = header["tolerances"]
    hints = tuple(_hint_in(h) for h in header["scaleHints"])
    cls = {"plane": PlaneDensity, "cylinder": CylinderDensity}[header["geometry"]]
    return cls(axes[0], axes[1], vals, float(tol["massTol"]),
               float(tol["tailTol"]), hints)


def write_density(d: PlaneDensity | CylinderDensity, path) -> None:
    Path(path).write_text(density_to_text(d), newline="\n")


def read_density(path) -> PlaneDensity | CylinderDensity:
    return parse_density_text(Path(path).read_text())
