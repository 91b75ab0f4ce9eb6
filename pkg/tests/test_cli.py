import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from cyltomo import (TorusDensity, TorusTomogramParams, default_cylinder_axes,
                     make_uniform_phi_gaussian, torus_tomogram)
from cyltomo.cli import main
from cyltomo.config import DEFAULT_CONFIG

SMALL_CYL = ["--phi-points", "64", "--j-points", "129"]
SMALL_INV = ["--quad", "modeTruncation=8", "--quad", "nuGridPoints=61"]


@pytest.fixture()
def runner():
    return CliRunner()


def _rows(path):
    lines = path.read_text().splitlines()
    return json.loads(lines[0]), lines[1], [l.split(",") for l in lines[2:]]


def test_forward_helix_constant_column(runner, tmp_path):
    out = tmp_path / "helix.csv"
    result = runner.invoke(main, [
        "forward", "--geometry", "helix", "--density", "exf", "--m", "1",
        "--nu", "3.2", "--x-min", "-3.14", "--x-max", "3.14",
        "--x-points", "101", "--output", str(out)])
    assert result.exit_code == 0, result.output
    header, columns, rows = _rows(out)
    assert columns == "X,value"
    assert len(rows) == 101
    values = np.array([float(r[1]) for r in rows])
    np.testing.assert_allclose(values, 1.0 / (2.0 * math.pi), atol=1e-8)
    assert all(round(v, 7) == 0.1591549 for v in values)
    assert header["geometry"] == "helix"
    assert header["params"]["period"] == pytest.approx(2.0 * math.pi)
    assert header["run"]["command"] == "forward"
    assert header["config"]["massTol"] == 1e-8


def test_forward_plane_known_value(runner, tmp_path):
    out = tmp_path / "plane.csv"
    result = runner.invoke(main, [
        "forward", "--geometry", "plane", "--mu", "1", "--nu", "0",
        "--grid-points", "129", "--x-min", "-2", "--x-max", "2",
        "--x-points", "5", "--output", str(out)])
    assert result.exit_code == 0, result.output
    _, _, rows = _rows(out)
    center = float(rows[2][1])
    assert center == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-7)


def test_forward_default_window_passes_verify(runner, tmp_path):
    out = tmp_path / "strip.csv"
    result = runner.invoke(main, ["forward", "--geometry", "strip",
                                  "--density", "wrapped", *SMALL_CYL,
                                  "--m", "1", "--nu", "1.0",
                                  "--output", str(out)])
    assert result.exit_code == 0, result.output
    check = runner.invoke(main, ["verify", str(out), "--tol", "1e-6"])
    assert check.exit_code == 0, check.output
    assert "ok" in check.output


def test_verify_flags_truncated_window(runner, tmp_path):
    out = tmp_path / "narrow.csv"
    runner.invoke(main, ["forward", "--geometry", "helix", "--density", "exf",
                         *SMALL_CYL, "--m", "1", "--nu", "3.2",
                         "--x-min", "-3.14", "--x-max", "3.14",
                         "--x-points", "101", "--output", str(out)])
    bad = runner.invoke(main, ["verify", str(out)])
    assert bad.exit_code == 1
    assert "FAIL" in bad.output
    rescued = runner.invoke(main, ["verify", str(out), "--tol", "1e-2"])
    assert rescued.exit_code == 0


def test_config_file_merge_and_override(runner, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "command": "forward", "geometry": "helix", "density": "exf",
        "m": 2, "nu": 1.0, "quadrature": {"xGridPoints": 61}}))
    out = tmp_path / "out.csv"
    result = runner.invoke(main, ["forward", "--config", str(cfg),
                                  *SMALL_CYL, "--output", str(out)])
    assert result.exit_code == 0, result.output
    header, _, rows = _rows(out)
    assert header["params"]["m"] == 2
    assert header["config"]["xGridPoints"] == 61
    assert len(rows) == 61

    result = runner.invoke(main, ["forward", "--config", str(cfg),
                                  *SMALL_CYL, "--m", "3",
                                  "--output", str(out)])
    assert result.exit_code == 0
    header, _, _ = _rows(out)
    assert header["params"]["m"] == 3  # flags beat the file


def test_config_file_rejections(runner, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"geometry": "helix", "m": 1, "nu": 1.0,
                               "bogusField": 3}))
    result = runner.invoke(main, ["forward", "--config", str(cfg)])
    assert result.exit_code == 1
    assert "bogusField" in result.stderr

    cfg.write_text(json.dumps({"command": "limit"}))
    result = runner.invoke(main, ["forward", "--config", str(cfg)])
    assert result.exit_code == 1
    assert "limit" in result.stderr

    cfg.write_text("not json")
    result = runner.invoke(main, ["forward", "--config", str(cfg)])
    assert result.exit_code == 1

    result = runner.invoke(main, ["forward", "--geometry", "strip",
                                  "--density", "exf", *SMALL_CYL,
                                  "--m", "0", "--nu", "0", "--output", "-"])
    assert result.exit_code == 1
    assert "degenerate" in result.stderr

    result = runner.invoke(main, ["forward", "--nu", "1.0"])
    assert result.exit_code == 1
    assert "geometry" in result.stderr


def test_strict_turns_warnings_into_exit_2(runner, tmp_path):
    args = ["forward", "--geometry", "strip", "--density", "exf",
            *SMALL_CYL, "--sigma", "2", "--m", "1", "--nu", "1",
            "--output", str(tmp_path / "w.csv")]
    soft = runner.invoke(main, args)
    assert soft.exit_code == 0
    assert "accuracy warning" in soft.stderr
    hard = runner.invoke(main, args + ["--strict"])
    assert hard.exit_code == 2


def test_byte_identical_reruns(runner, tmp_path):
    out = tmp_path / "b.csv"
    args = ["forward", "--geometry", "strip", "--density", "wrapped",
            *SMALL_CYL, "--m", "1", "--nu", "1.0", "--output", str(out)]
    assert runner.invoke(main, args).exit_code == 0
    first = out.read_bytes()
    assert runner.invoke(main, args).exit_code == 0
    assert out.read_bytes() == first


def test_oracle_check_report(runner, tmp_path):
    out = tmp_path / "oracle.csv"
    result = runner.invoke(main, ["oracle-check", "--suite", "gaussian",
                                  "--output", str(out)])
    assert result.exit_code == 0, result.output
    header, columns, rows = _rows(out)
    assert header["pass"] is True
    assert columns == "family,formulaTag,point,numeric,reference,absError"
    assert all(err <= tol for err, tol in
               zip(header["maxAbsErrorByTag"].values(),
                   header["tolerances"].values()))
    assert len(rows) > 20

    result = runner.invoke(main, ["oracle-check", "--suite", "lorentz"])
    assert result.exit_code == 1
    assert "suite" in result.stderr


def test_roundtrip_report(runner, tmp_path):
    out = tmp_path / "rt.csv"
    result = runner.invoke(main, [
        "roundtrip", "--geometry", "strip", "--density", "exf", *SMALL_CYL,
        *SMALL_INV, "--eval-phi-points", "6", "--eval-j-points", "5",
        "--output", str(out)])
    assert result.exit_code == 0, result.output
    header, columns, rows = _rows(out)
    assert columns == "phi,J,truth,reconstructed,absError"
    assert header["pass"] is True
    assert header["linfError"] <= 1e-3
    assert header["nodes"] == len(rows)


def test_limit_report(runner, tmp_path):
    out = tmp_path / "limit.csv"
    radii = f"{2 * math.pi},{20 * math.pi}"
    result = runner.invoke(main, ["limit", "--radii", radii,
                                  "--grid-points", "129",
                                  "--output", str(out)])
    assert result.exit_code == 0, result.output
    header, columns, rows = _rows(out)
    assert columns == "R,maxAbsError,snapError,runtimeSeconds"
    assert header["strictlyDecreasing"] is True
    assert len(rows) == 2
    assert float(rows[1][1]) < float(rows[0][1])
    assert rows[0][3] == "0" and rows[1][3] == "0"


def test_torus_component_files(runner, tmp_path):
    out = tmp_path / "torus.csv"
    result = runner.invoke(main, [
        "torus", "--m", "1,1", "--nu", "1.0,1.0", "--alpha", "0.0,0.0",
        "--density", "exf", "--phi-points", "48", "--j-points", "97",
        *SMALL_INV, "--at", "0.0,0.0", "--inverse-at", "0.0,0.0,0.0,0.0",
        "--output", str(out)])
    assert result.exit_code == 0, result.output
    c0, c1 = tmp_path / "torus-c0.csv", tmp_path / "torus-c1.csv"
    assert c0.exists() and c1.exists()
    header, _, _ = _rows(c0)
    assert header["geometry"] == "torus"
    assert header["params"] == {"n": 2, "m": [1, 1], "nu": [1.0, 1.0],
                                "alpha": [0.0, 0.0], "component": 0}
    check = runner.invoke(main, ["verify", str(c0), str(c1), "--tol", "1e-6"])
    assert check.exit_code == 0, check.output

    assert "tomogram(0,0) = " in result.output
    printed = float(result.output.split("tomogram(0,0) = ")[1].split()[0])
    cfg = DEFAULT_CONFIG.replace(mode_truncation=8, nu_grid_points=61)
    f = make_uniform_phi_gaussian(axes=default_cylinder_axes(48, 97), cfg=cfg)
    expected = torus_tomogram(
        TorusDensity(factors=(f, f)),
        [0.0, 0.0],
        TorusTomogramParams(m=(1, 1), nu=(1.0, 1.0), alpha=(0.0, 0.0)),
        cfg)
    assert printed == pytest.approx(expected, rel=1e-6)
    assert "density(0,0,0,0) = " in result.output

    missing = runner.invoke(main, ["torus", "--m", "1,1", "--nu", "1,1"])
    assert missing.exit_code == 1
    assert "output" in missing.stderr


def test_helix_params_report(runner, tmp_path):
    out = tmp_path / "hp.csv"
    result = runner.invoke(main, ["helix-params", "--m", "1", "--nu", "3.2",
                                  "--x", "0.7", "--output", str(out)])
    assert result.exit_code == 0, result.output
    header, columns, rows = _rows(out)
    assert columns == "theta,intercept,shift"
    theta, intercept, shift = (float(v) for v in rows[0])
    assert theta == pytest.approx(math.atan(-1.0 / 3.2), rel=1e-12)
    assert intercept == pytest.approx(0.7, rel=1e-12)
    assert shift == pytest.approx((2.0 * math.pi - 0.7) * (-1.0 / 3.2),
                                  rel=1e-12)
    assert header["roundTrip"]["m"] == 1
    assert header["roundTrip"]["nu"] == pytest.approx(3.2, rel=1e-12)
    assert header["roundTrip"]["x"] == pytest.approx(0.7, rel=1e-12)


def test_inverse_report(runner, tmp_path):
    out = tmp_path / "inv.csv"
    result = runner.invoke(main, [
        "inverse", "--geometry", "helix", "--density", "wrapped", *SMALL_CYL,
        "--quad", "modeTruncation=8", "--quad", "nuGridPoints=41",
        "--eval-phi-points", "4", "--eval-j-points", "3",
        "--output", str(out)])
    assert result.exit_code == 0, result.output
    header, columns, rows = _rows(out)
    assert columns == "phi,J,value"
    assert header["rows"] == len(rows) == 12
    peak = [float(r[2]) for r in rows
            if abs(float(r[0]) - math.pi) < 1.7 and float(r[1]) == 0.0]
    tail = [float(r[2]) for r in rows
            if abs(float(r[0])) < 0.1 and abs(float(r[1])) == 2.0]
    assert min(peak) > max(tail)


def test_thread_env_validation(runner, tmp_path):
    result = runner.invoke(main, ["verify", str(tmp_path / "x.csv")],
                           env={"CYLTOMO_THREADS": "abc"})
    assert result.exit_code == 1
    assert "CYLTOMO_THREADS" in result.stderr
