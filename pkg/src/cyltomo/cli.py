"""Command-line front end.

Every run resolves to a flat config (config file < flags), and every
output file embeds that resolved run plus the quadrature settings in a
one-line JSON header, so artifacts are reproducible byte for byte.

Exit codes: 0 success, 1 validation error or failed check, 2 when
--strict turns collected accuracy warnings into an error.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from .circle import (
    DensityHelixSampler,
    DensityStripSampler,
    circle_inverse_helix,
    circle_inverse_strip,
    helix_params_from_tomogram,
    helix_params_to_tomogram,
)
from .config import AccuracyWarning, DEFAULT_CONFIG, thread_cap
from .densities import (
    CylinderDensity,
    PlaneDensity,
    TorusDensity,
    default_cylinder_axes,
    default_plane_axes,
    make_plane_gaussian,
    make_uniform_phi_gaussian,
    make_wrapped_gaussian,
)
from .grid import GridAxis, TWO_PI
from .limits import (
    DEFAULT_MU_SAMPLES,
    DEFAULT_NU_SAMPLES,
    DEFAULT_RADII,
    DEFAULT_X_SAMPLES,
    convergence_report,
)
from .oracles import run_oracle_suite
from .plane import PlaneSliceSampler, plane_inverse
from .slices import (
    _fmt,
    config_from_header,
    config_to_header,
    helix_slice,
    parse_slice_text,
    plane_slice,
    read_density,
    slice_to_text,
    strip_slice,
    torus_component_slices,
)
from .torus import TorusTomogramParams, torus_inverse, torus_tomogram

__all__ = ["main"]

ORACLE_TOLERANCES = {"strip-erf": 1e-6, "m0-gauss": 1e-8, "helix-const": 1e-8,
                     "plane-gauss": 1e-6, "strip-wrapped": 1e-6,
                     "helix-wrapped": 1e-6}


# -- config resolution --------------------------------------------------------

def _load_config_file(path) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return data


def _resolve(command: str, file_cfg: dict, flags: dict, defaults: dict,
             quad_pairs: tuple, strict_flag, output_flag):
    """Merge config file and flags into one run dict; flags win.

    Rejects keys the command does not know, names the offending field.
    """
    allowed = set(defaults) | {"command", "quadrature", "strict", "output"}
    for key in file_cfg:
        if key not in allowed:
            raise ValueError(f"unknown config field {key!r} for command "
                             f"{command!r}")
    file_command = file_cfg.get("command")
    if file_command is not None and file_command != command:
        raise ValueError(f"config file is for command {file_command!r}, "
                         f"not {command!r}")

    run = {"command": command}
    for key, default in defaults.items():
        value = flags.get(key)
        if value is None:
            value = file_cfg.get(key, default)
        run[key] = value

    quad = dict(file_cfg.get("quadrature") or {})
    for pair in quad_pairs:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise ValueError(f"--quad expects KEY=VALUE, got {pair!r}")
        quad[key] = _number(raw, key)
    cfg = config_from_header(quad)
    run["quadrature"] = config_to_header(cfg)

    strict = strict_flag if strict_flag is not None \
        else bool(file_cfg.get("strict", False))
    run["strict"] = strict
    output = output_flag if output_flag is not None \
        else file_cfg.get("output", defaults.get("output", "-"))
    run["output"] = output
    return run, cfg, strict, output


def _number(raw: str, field: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"field {field!r} expects a number, got {raw!r}")


def _float_list(value, field: str) -> list[float]:
    if value is None:
        raise ValueError(f"field {field!r} is required")
    if isinstance(value, str):
        value = [tok for tok in value.split(",") if tok.strip()]
    try:
        out = [float(v) for v in value]
    except (TypeError, ValueError):
        raise ValueError(f"field {field!r} expects a comma list of numbers, "
                         f"got {value!r}")
    if not out:
        raise ValueError(f"field {field!r} must not be empty")
    return out


def _int_list(value, field: str) -> list[int]:
    floats = _float_list(value, field)
    if any(v != int(v) for v in floats):
        raise ValueError(f"field {field!r} expects integers, got {value!r}")
    return [int(v) for v in floats]


def _require(run: dict, key: str, geometry: str | None = None):
    if run.get(key) is None:
        where = f" for {geometry} geometry" if geometry else ""
        raise ValueError(f"field {key!r} is required{where}")
    return run[key]


# -- density construction -----------------------------------------------------

def _plane_density(run: dict, cfg) -> PlaneDensity:
    if run.get("densityFile"):
        d = read_density(run["densityFile"])
        if not isinstance(d, PlaneDensity):
            raise ValueError(f"{run['densityFile']} does not hold a plane "
                             "density")
        return d
    name = run.get("density") or "gauss"
    if name != "gauss":
        raise ValueError(f"unknown plane density {name!r} (builtin: gauss)")
    axes = default_plane_axes(int(run["gridPoints"]), float(run["gridHalfwidth"]))
    return make_plane_gaussian(run["q0"], run["p0"], run["sigmaQ"],
                               run["sigmaP"], axes=axes, cfg=cfg)


def _cylinder_density(run: dict, cfg) -> CylinderDensity:
    if run.get("densityFile"):
        d = read_density(run["densityFile"])
        if not isinstance(d, CylinderDensity):
            raise ValueError(f"{run['densityFile']} does not hold a cylinder "
                             "density")
        return d
    name = run.get("density") or "exf"
    axes = default_cylinder_axes(int(run["phiPoints"]), int(run["jPoints"]),
                                 float(run["jMax"]))
    if name == "exf":
        return make_uniform_phi_gaussian(run["sigma"], axes=axes, cfg=cfg)
    if name == "wrapped":
        return make_wrapped_gaussian(run["phi0"], run["sigmaPhi"], run["j0"],
                                     run["sigmaJ"], axes=axes, cfg=cfg)
    raise ValueError(f"unknown cylinder density {name!r} "
                     "(builtins: exf, wrapped)")


def _component_density(name: str, axes, cfg) -> CylinderDensity:
    if name == "exf":
        return make_uniform_phi_gaussian(axes=axes, cfg=cfg)
    if name == "wrapped":
        return make_wrapped_gaussian(axes=axes, cfg=cfg)
    raise ValueError(f"unknown torus component density {name!r} "
                     "(builtins: exf, wrapped)")


# -- output -------------------------------------------------------------------

def _emit(text: str, output):
    if output in (None, "-"):
        click.echo(text, nl=False)
    else:
        Path(output).write_text(text, newline="\n")


def _report_text(run: dict, cfg, extra: dict, body_lines: list[str]) -> str:
    header = {"format": "cyltomo-report", "version": 1,
              "run": run, "config": config_to_header(cfg)}
    header.update(extra)
    line = json.dumps(header, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)
    return "\n".join([line] + body_lines) + "\n"


def _execute(command: str, defaults: dict, flags: dict, config_path,
             quad_pairs, strict_flag, output_flag, body):
    try:
        file_cfg = _load_config_file(config_path)
        run, cfg, strict, output = _resolve(command, file_cfg, flags,
                                            defaults, quad_pairs,
                                            strict_flag, output_flag)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            status = body(run, cfg, output) or 0
        noted = [w for w in caught if issubclass(w.category, AccuracyWarning)]
        for w in noted:
            click.echo(f"accuracy warning: {w.message}", err=True)
        if strict and noted:
            raise SystemExit(2)
        if status:
            raise SystemExit(status)
    except SystemExit:
        raise
    except (ValueError, TypeError, KeyError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(1)


def _pool_map(fn, items):
    """Order-preserving map, parallel up to the CYLTOMO_THREADS cap."""
    items = list(items)
    cap = min(thread_cap(), len(items))
    if cap <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))


def _common(fn):
    fn = click.option("--output", default=None, metavar="PATH",
                      help="Output file ('-' for stdout).")(fn)
    fn = click.option("--quad", "quad_pairs", multiple=True,
                      metavar="KEY=VALUE",
                      help="Quadrature override, e.g. modeTruncation=8.")(fn)
    fn = click.option("--strict/--no-strict", "strict_flag", default=None,
                      help="Turn accuracy warnings into exit code 2.")(fn)
    fn = click.option("--config", "config_path", default=None, metavar="PATH",
                      help="JSON run config; flags override its fields.")(fn)
    return fn


@click.group()
def main():
    """Tomographic transforms on the plane, cylinder, and torus."""


# -- forward ------------------------------------------------------------------

FORWARD_DEFAULTS = {
    "geometry": None, "density": None, "densityFile": None,
    "sigma": 1.0, "phi0": math.pi, "sigmaPhi": 0.7, "j0": 0.0, "sigmaJ": 1.0,
    "q0": 0.0, "p0": 0.0, "sigmaQ": 1.0, "sigmaP": 1.0,
    "phiPoints": 256, "jPoints": 513, "jMax": 8.0,
    "gridPoints": 513, "gridHalfwidth": 8.0,
    "mu": 0.0, "nu": 0.0, "m": 0, "alpha": 0.0,
    "xMin": None, "xMax": None, "xPoints": None,
}


def _explicit_axis(run: dict) -> GridAxis | None:
    given = [k for k in ("xMin", "xMax", "xPoints") if run.get(k) is not None]
    if not given:
        return None
    if len(given) < 3:
        missing = [k for k in ("xMin", "xMax", "xPoints") if run.get(k) is None]
        raise ValueError(f"field {missing[0]!r} is required when an explicit "
                         "X window is given")
    return GridAxis.linspace(float(run["xMin"]), float(run["xMax"]),
                             int(run["xPoints"]))


def _forward_body(run, cfg, output):
    geometry = _require(run, "geometry")
    axis = _explicit_axis(run)
    if geometry == "plane":
        f = _plane_density(run, cfg)
        s = plane_slice(f, run["mu"], run["nu"], axis, cfg)
    elif geometry == "strip":
        f = _cylinder_density(run, cfg)
        s = strip_slice(f, int(run["m"]), run["nu"], run["alpha"], axis, cfg)
    elif geometry == "helix":
        f = _cylinder_density(run, cfg)
        s = helix_slice(f, int(run["m"]), run["nu"], axis, cfg)
    else:
        raise ValueError("forward handles plane, strip, and helix; use the "
                         "torus command for torus runs")
    _emit(slice_to_text(s, cfg, run=run), output)


@main.command("forward")
@click.option("--geometry", type=click.Choice(["plane", "strip", "helix"]))
@click.option("--density", default=None,
              help="Builtin density: gauss (plane), exf or wrapped (cylinder).")
@click.option("--density-file", default=None, metavar="PATH")
@click.option("--sigma", type=float, default=None)
@click.option("--phi0", type=float, default=None)
@click.option("--sigma-phi", type=float, default=None)
@click.option("--j0", type=float, default=None)
@click.option("--sigma-j", type=float, default=None)
@click.option("--q0", type=float, default=None)
@click.option("--p0", type=float, default=None)
@click.option("--sigma-q", type=float, default=None)
@click.option("--sigma-p", type=float, default=None)
@click.option("--phi-points", type=int, default=None)
@click.option("--j-points", type=int, default=None)
@click.option("--j-max", type=float, default=None)
@click.option("--grid-points", type=int, default=None)
@click.option("--grid-halfwidth", type=float, default=None)
@click.option("--mu", type=float, default=None)
@click.option("--nu", type=float, default=None)
@click.option("--m", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--x-min", type=float, default=None)
@click.option("--x-max", type=float, default=None)
@click.option("--x-points", type=int, default=None)
@_common
def forward(config_path, quad_pairs, strict_flag, output, **kw):
    """Write one tomogram slice as a CSV file with a JSON header."""
    flags = {_camel_key(k): v for k, v in kw.items()}
    _execute("forward", FORWARD_DEFAULTS, flags, config_path, quad_pairs,
             strict_flag, output, _forward_body)


def _camel_key(name: str) -> str:
    head, *rest = name.split("_")
    return head + "".join(w.capitalize() for w in rest)


# -- inverse ------------------------------------------------------------------

INVERSE_DEFAULTS = {
    "geometry": None, "density": None, "densityFile": None,
    "sigma": 1.0, "phi0": math.pi, "sigmaPhi": 0.7, "j0": 0.0, "sigmaJ": 1.0,
    "q0": 0.0, "p0": 0.0, "sigmaQ": 1.0, "sigmaP": 1.0,
    "phiPoints": 256, "jPoints": 513, "jMax": 8.0,
    "gridPoints": 513, "gridHalfwidth": 8.0,
    "alpha": 0.0, "mode": "cartesian",
    "evalPhiPoints": 8, "evalJPoints": 5, "evalJMax": 2.0,
    "evalPoints": 5, "evalHalfwidth": 2.0,
}


def _inverse_body(run, cfg, output):
    geometry = _require(run, "geometry")
    if geometry == "plane":
        f = _plane_density(run, cfg)
        side = np.linspace(-run["evalHalfwidth"], run["evalHalfwidth"],
                           int(run["evalPoints"]))
        qg, pg = np.meshgrid(side, side, indexing="ij")
        sampler = PlaneSliceSampler(f, cfg)
        vals = plane_inverse(sampler, qg.ravel(), pg.ravel(), cfg,
                             mode=run["mode"])
        cols, names = (qg.ravel(), pg.ravel()), "q,p"
    elif geometry in ("strip", "helix"):
        f = _cylinder_density(run, cfg)
        phi = np.arange(int(run["evalPhiPoints"])) \
            * TWO_PI / int(run["evalPhiPoints"])
        j = np.linspace(-run["evalJMax"], run["evalJMax"],
                        int(run["evalJPoints"]))
        pg, jg = np.meshgrid(phi, j, indexing="ij")
        if geometry == "strip":
            sampler = DensityStripSampler(f, run["alpha"], cfg)
            vals = circle_inverse_strip(sampler, pg.ravel(), jg.ravel(), cfg)
        else:
            sampler = DensityHelixSampler(f, cfg)
            vals = circle_inverse_helix(sampler, pg.ravel(), jg.ravel(), cfg)
        cols, names = (pg.ravel(), jg.ravel()), "phi,J"
    else:
        raise ValueError("inverse handles plane, strip, and helix; use the "
                         "torus command with --inverse-at for torus runs")
    body = [names + ",value"]
    for a, b, v in zip(cols[0], cols[1], np.asarray(vals)):
        body.append(f"{_fmt(a)},{_fmt(b)},{_fmt(v)}")
    _emit(_report_text(run, cfg, {"rows": len(body) - 1}, body), output)


@main.command("inverse")
@click.option("--geometry", type=click.Choice(["plane", "strip", "helix"]))
@click.option("--density", default=None)
@click.option("--density-file", default=None, metavar="PATH")
@click.option("--sigma", type=float, default=None)
@click.option("--phi0", type=float, default=None)
@click.option("--sigma-phi", type=float, default=None)
@click.option("--j0", type=float, default=None)
@click.option("--sigma-j", type=float, default=None)
@click.option("--q0", type=float, default=None)
@click.option("--p0", type=float, default=None)
@click.option("--sigma-q", type=float, default=None)
@click.option("--sigma-p", type=float, default=None)
@click.option("--phi-points", type=int, default=None)
@click.option("--j-points", type=int, default=None)
@click.option("--j-max", type=float, default=None)
@click.option("--grid-points", type=int, default=None)
@click.option("--grid-halfwidth", type=float, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--mode", type=click.Choice(["cartesian", "polar"]), default=None)
@click.option("--eval-phi-points", type=int, default=None)
@click.option("--eval-j-points", type=int, default=None)
@click.option("--eval-j-max", type=float, default=None)
@click.option("--eval-points", type=int, default=None)
@click.option("--eval-halfwidth", type=float, default=None)
@_common
def inverse(config_path, quad_pairs, strict_flag, output, **kw):
    """Reconstruct a density from its own tomograms on an evaluation grid."""
    flags = {_camel_key(k): v for k, v in kw.items()}
    _execute("inverse", INVERSE_DEFAULTS, flags, config_path, quad_pairs,
             strict_flag, output, _inverse_body)


# -- oracle-check -------------------------------------------------------------

ORACLE_DEFAULTS = {"suite": "gaussian", "includePlane": True}


def _oracle_body(run, cfg, output):
    if run["suite"] != "gaussian":
        raise ValueError(f"unknown oracle suite {run['suite']!r} "
                         "(available: gaussian)")
    rows = run_oracle_suite(cfg, include_plane=bool(run["includePlane"]))
    worst: dict[str, float] = {}
    for row in rows:
        tag = row["formulaTag"]
        worst[tag] = max(worst.get(tag, 0.0), row["absError"])
    ok = all(err <= ORACLE_TOLERANCES.get(tag, 1e-6)
             for tag, err in worst.items())
    body = ["family,formulaTag,point,numeric,reference,absError"]
    for row in rows:
        point = ";".join(_fmt(v) for v in row["point"])
        body.append(",".join([row["family"], row["formulaTag"], point,
                              _fmt(row["numeric"]), _fmt(row["reference"]),
                              _fmt(row["absError"])]))
    extra = {"maxAbsErrorByTag": {t: worst[t] for t in sorted(worst)},
             "tolerances": {t: ORACLE_TOLERANCES.get(t, 1e-6)
                            for t in sorted(worst)},
             "pass": ok}
    _emit(_report_text(run, cfg, extra, body), output)
    return 0 if ok else 1


@main.command("oracle-check")
@click.option("--suite", default=None)
@click.option("--include-plane/--no-include-plane", "include_plane",
              default=None)
@_common
def oracle_check(config_path, quad_pairs, strict_flag, output, **kw):
    """Compare numeric tomograms against the closed-form panel."""
    flags = {_camel_key(k): v for k, v in kw.items()}
    _execute("oracle-check", ORACLE_DEFAULTS, flags, config_path, quad_pairs,
             strict_flag, output, _oracle_body)


# -- roundtrip ----------------------------------------------------------------

ROUNDTRIP_DEFAULTS = {
    "geometry": None, "density": None, "densityFile": None,
    "sigma": 1.0, "phi0": math.pi, "sigmaPhi": 0.7, "j0": 0.0, "sigmaJ": 1.0,
    "q0": 0.0, "p0": 0.0, "sigmaQ": 1.0, "sigmaP": 1.0,
    "phiPoints": 256, "jPoints": 513, "jMax": 8.0,
    "gridPoints": 513, "gridHalfwidth": 8.0,
    "alpha": 0.0, "mode": "cartesian",
    "evalPhiPoints": 16, "evalJPoints": 9, "evalJMax": 4.0,
    "evalPoints": 3, "evalHalfwidth": 1.0, "linfTol": None,
}


def _node_subset(axis: GridAxis, n: int, j_max: float | None = None):
    idx = np.arange(axis.count)
    if j_max is not None:
        idx = idx[np.abs(axis.points()) <= j_max]
    if len(idx) > n:
        idx = idx[np.unique(np.round(np.linspace(0, len(idx) - 1, n))
                            .astype(int))]
    return idx


def _roundtrip_body(run, cfg, output):
    geometry = _require(run, "geometry")
    if geometry == "plane":
        f = _plane_density(run, cfg)
        side = np.linspace(-run["evalHalfwidth"], run["evalHalfwidth"],
                           int(run["evalPoints"]))
        qg, pg = np.meshgrid(side, side, indexing="ij")
        truth = f.eval(qg.ravel(), pg.ravel())
        recon = np.asarray(plane_inverse(PlaneSliceSampler(f, cfg),
                                         qg.ravel(), pg.ravel(), cfg,
                                         mode=run["mode"]))
        cols, names = (qg.ravel(), pg.ravel()), "q,p"
        tol = run["linfTol"] if run["linfTol"] is not None else 1e-2
    elif geometry in ("strip", "helix"):
        f = _cylinder_density(run, cfg)
        pi_idx = _node_subset(f.phi_axis, int(run["evalPhiPoints"]))
        ji_idx = _node_subset(f.j_axis, int(run["evalJPoints"]),
                              float(run["evalJMax"]))
        phi = f.phi_axis.points()[pi_idx]
        j = f.j_axis.points()[ji_idx]
        pg, jg = np.meshgrid(phi, j, indexing="ij")
        truth = f.values[np.ix_(pi_idx, ji_idx)].ravel()
        if geometry == "strip":
            sampler = DensityStripSampler(f, run["alpha"], cfg)
            recon = np.asarray(circle_inverse_strip(sampler, pg.ravel(),
                                                    jg.ravel(), cfg))
        else:
            sampler = DensityHelixSampler(f, cfg)
            recon = np.asarray(circle_inverse_helix(sampler, pg.ravel(),
                                                    jg.ravel(), cfg))
        cols, names = (pg.ravel(), jg.ravel()), "phi,J"
        tol = run["linfTol"] if run["linfTol"] is not None else 1e-3
    else:
        raise ValueError("roundtrip handles plane, strip, and helix")
    err = np.abs(np.asarray(truth) - recon)
    linf = float(err.max())
    body = [names + ",truth,reconstructed,absError"]
    for a, b, t, r, e in zip(cols[0], cols[1], np.asarray(truth), recon, err):
        body.append(",".join(_fmt(v) for v in (a, b, t, r, e)))
    extra = {"linfError": linf, "linfTol": tol, "pass": linf <= tol,
             "nodes": len(err)}
    _emit(_report_text(run, cfg, extra, body), output)
    return 0 if linf <= tol else 1


@main.command("roundtrip")
@click.option("--geometry", type=click.Choice(["plane", "strip", "helix"]))
@click.option("--density", default=None)
@click.option("--density-file", default=None, metavar="PATH")
@click.option("--sigma", type=float, default=None)
@click.option("--phi0", type=float, default=None)
@click.option("--sigma-phi", type=float, default=None)
@click.option("--j0", type=float, default=None)
@click.option("--sigma-j", type=float, default=None)
@click.option("--q0", type=float, default=None)
@click.option("--p0", type=float, default=None)
@click.option("--sigma-q", type=float, default=None)
@click.option("--sigma-p", type=float, default=None)
@click.option("--phi-points", type=int, default=None)
@click.option("--j-points", type=int, default=None)
@click.option("--j-max", type=float, default=None)
@click.option("--grid-points", type=int, default=None)
@click.option("--grid-halfwidth", type=float, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--mode", type=click.Choice(["cartesian", "polar"]), default=None)
@click.option("--eval-phi-points", type=int, default=None)
@click.option("--eval-j-points", type=int, default=None)
@click.option("--eval-j-max", type=float, default=None)
@click.option("--eval-points", type=int, default=None)
@click.option("--eval-halfwidth", type=float, default=None)
@click.option("--linf-tol", type=float, default=None)
@_common
def roundtrip(config_path, quad_pairs, strict_flag, output, **kw):
    """Forward-then-inverse report with the L-infinity node error."""
    flags = {_camel_key(k): v for k, v in kw.items()}
    _execute("roundtrip", ROUNDTRIP_DEFAULTS, flags, config_path, quad_pairs,
             strict_flag, output, _roundtrip_body)


# -- limit --------------------------------------------------------------------

LIMIT_DEFAULTS = {
    "radii": list(DEFAULT_RADII), "muSamples": list(DEFAULT_MU_SAMPLES),
    "nuSamples": list(DEFAULT_NU_SAMPLES), "xSamples": list(DEFAULT_X_SAMPLES),
    "recordRuntime": False, "gridPoints": 513, "gridHalfwidth": 8.0,
    "q0": 0.0, "p0": 0.0, "sigmaQ": 1.0, "sigmaP": 1.0,
    "density": None, "densityFile": None,
}


def _limit_body(run, cfg, output):
    g = _plane_density(run, cfg)
    report = convergence_report(
        g, radii=_float_list(run["radii"], "radii"),
        mu_samples=_float_list(run["muSamples"], "muSamples"),
        nu_samples=_float_list(run["nuSamples"], "nuSamples"),
        x_samples=_float_list(run["xSamples"], "xSamples"),
        cfg=cfg, record_runtime=bool(run["recordRuntime"]))
    decreasing = all(a.max_abs_error > b.max_abs_error
                     for a, b in zip(report.rows, report.rows[1:]))
    extra = {"rows": len(report.rows), "strictlyDecreasing": decreasing,
             "finalMaxAbsError": report.rows[-1].max_abs_error}
    body = report.to_csv().rstrip("\n").split("\n")
    _emit(_report_text(run, cfg, extra, body), output)


@main.command("limit")
@click.option("--radii", default=None, metavar="R1,R2,...")
@click.option("--mu-samples", default=None, metavar="MU1,MU2,...")
@click.option("--nu-samples", default=None, metavar="NU1,NU2,...")
@click.option("--x-samples", default=None, metavar="X1,X2,...")
@click.option("--record-runtime/--no-record-runtime", "record_runtime",
              default=None)
@click.option("--grid-points", type=int, default=None)
@click.option("--grid-halfwidth", type=float, default=None)
@click.option("--q0", type=float, default=None)
@click.option("--p0", type=float, default=None)
@click.option("--sigma-q", type=float, default=None)
@click.option("--sigma-p", type=float, default=None)
@click.option("--density", default=None)
@click.option("--density-file", default=None, metavar="PATH")
@_common
def limit(config_path, quad_pairs, strict_flag, output, **kw):
    """Large-circumference convergence table against the plane transform."""
    flags = {_camel_key(k): v for k, v in kw.items()}
    _execute("limit", LIMIT_DEFAULTS, flags, config_path, quad_pairs,
             strict_flag, output, _limit_body)


# -- torus --------------------------------------------------------------------

TORUS_DEFAULTS = {
    "m": None, "nu": None, "alpha": None, "density": None,
    "phiPoints": 256, "jPoints": 513, "jMax": 8.0,
    "at": None, "inverseAt": None,
}


def _torus_paths(output, n: int) -> list[Path]:
    if output in (None, "-"):
        raise ValueError("field 'output' is required for torus runs (one "
                         "file per component)")
    base = Path(output)
    return [base.with_name(f"{base.stem}-c{k}{base.suffix}") for k in range(n)]


def _torus_body(run, cfg, output):
    m = _int_list(_require(run, "m"), "m")
    nu = _float_list(_require(run, "nu"), "nu")
    alpha = None if run["alpha"] is None else _float_list(run["alpha"], "alpha")
    params = TorusTomogramParams(tuple(m), tuple(nu),
                                 None if alpha is None else tuple(alpha))
    names = run["density"] or "exf"
    if isinstance(names, str):
        names = [tok for tok in names.split(",") if tok.strip()]
    if len(names) == 1:
        names = list(names) * params.n_components
    if len(names) != params.n_components:
        raise ValueError(f"field 'density' lists {len(names)} components, "
                         f"parameters have {params.n_components}")
    axes = default_cylinder_axes(int(run["phiPoints"]), int(run["jPoints"]),
                                 float(run["jMax"]))
    factors = tuple(_component_density(name, axes, cfg) for name in names)
    density = TorusDensity(factors=factors)

    parts = torus_component_slices(density, params, cfg)
    paths = _torus_paths(output, params.n_components)
    _pool_map(lambda kp: paths[kp[0]].write_text(
        slice_to_text(kp[1], cfg, run=run), newline="\n"),
        list(enumerate(parts)))
    for path in paths:
        click.echo(f"wrote {path}")

    if run["at"] is not None:
        X = _float_list(run["at"], "at")
        if len(X) != params.n_components:
            raise ValueError(f"field 'at' needs {params.n_components} "
                             "components")
        value = torus_tomogram(density, np.array(X), params, cfg)
        click.echo(f"tomogram({','.join(_fmt(x) for x in X)}) = {_fmt(value)}")
    if run["inverseAt"] is not None:
        pt = _float_list(run["inverseAt"], "inverseAt")
        if len(pt) != 2 * params.n_components:
            raise ValueError(f"field 'inverseAt' needs "
                             f"{2 * params.n_components} coordinates "
                             "(phi_1, J_1, ...)")
        samplers = []
        for k, factor in enumerate(factors):
            if alpha is None:
                samplers.append(DensityHelixSampler(factor, cfg))
            else:
                samplers.append(DensityStripSampler(factor, alpha[k], cfg))
        phis = [np.array([pt[2 * k]]) for k in range(params.n_components)]
        js = [np.array([pt[2 * k + 1]]) for k in range(params.n_components)]
        value = torus_inverse(samplers, phis, js, cfg)
        click.echo(f"density({','.join(_fmt(x) for x in pt)}) = {_fmt(value)}")


@main.command("torus")
@click.option("--m", default=None, metavar="M1,M2,...")
@click.option("--nu", default=None, metavar="NU1,NU2,...")
@click.option("--alpha", default=None, metavar="A1,A2,...")
@click.option("--density", default=None, metavar="NAME1,NAME2,...",
              help="Component builtins (exf, wrapped); one name replicates.")
@click.option("--phi-points", type=int, default=None)
@click.option("--j-points", type=int, default=None)
@click.option("--j-max", type=float, default=None)
@click.option("--at", default=None, metavar="X1,X2,...",
              help="Print the product tomogram at this X vector.")
@click.option("--inverse-at", default=None, metavar="PHI1,J1,...",
              help="Print the reconstructed density at this point.")
@_common
def torus(config_path, quad_pairs, strict_flag, output, **kw):
    """Per-component slice files for a product density on the torus."""
    flags = {_camel_key(k): v for k, v in kw.items()}
    _execute("torus", TORUS_DEFAULTS, flags, config_path, quad_pairs,
             strict_flag, output, _torus_body)


# -- helix-params -------------------------------------------------------------

HELIX_PARAMS_DEFAULTS = {"m": None, "nu": None, "x": None}


def _helix_params_body(run, cfg, output):
    m = int(_require(run, "m"))
    nu = float(_require(run, "nu"))
    x = float(_require(run, "x"))
    hp = helix_params_from_tomogram(m, nu, x)
    back_m, back_nu, back_x = helix_params_to_tomogram(hp, m)
    extra = {"roundTrip": {"m": back_m, "nu": back_nu, "x": back_x}}
    body = ["theta,intercept,shift",
            ",".join(_fmt(v) for v in (hp.theta, hp.intercept, hp.shift))]
    _emit(_report_text(run, cfg, extra, body), output)


@main.command("helix-params")
@click.option("--m", type=int, default=None)
@click.option("--nu", type=float, default=None)
@click.option("--x", type=float, default=None)
@_common
def helix_params(config_path, quad_pairs, strict_flag, output, **kw):
    """Geometric helix labels (slope angle, intercept, shift) for (m, nu, X)."""
    flags = {_camel_key(k): v for k, v in kw.items()}
    _execute("helix-params", HELIX_PARAMS_DEFAULTS, flags, config_path,
             quad_pairs, strict_flag, output, _helix_params_body)


# -- verify -------------------------------------------------------------------

VERIFY_DEFAULTS = {"inputs": None, "tol": None}


def _verify_body(run, cfg, output):
    paths = run["inputs"]
    if not paths:
        raise ValueError("field 'inputs' needs at least one slice file")

    def check(path):
        s, file_cfg = parse_slice_text(Path(path).read_text())
        tol = run["tol"] if run["tol"] is not None else 2.0 * file_cfg.mass_tol
        integral = s.integral()
        defect = abs(integral - 1.0)
        return (f"{path}: integral={_fmt(integral)} defect={_fmt(defect)} "
                f"tol={_fmt(tol)} {'ok' if defect <= tol else 'FAIL'}",
                defect <= tol)

    results = _pool_map(check, paths)
    lines = [line for line, _ in results]
    ok = all(good for _, good in results)
    _emit("\n".join(lines) + "\n", output)
    return 0 if ok else 1


@main.command("verify")
@click.argument("inputs", nargs=-1)
@click.option("--tol", type=float, default=None,
              help="Normalization tolerance; default 2x the file's massTol.")
@_common
def verify(config_path, quad_pairs, strict_flag, output, inputs, tol):
    """Re-integrate emitted slice files and check normalization."""
    flags = {"inputs": list(inputs) or None, "tol": tol}
    _execute("verify", VERIFY_DEFAULTS, flags, config_path, quad_pairs,
             strict_flag, output, _verify_body)


if __name__ == "__main__":
    main()
