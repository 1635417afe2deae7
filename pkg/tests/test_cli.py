"""Command-line front-end: exit codes, report envelopes, determinism."""

import csv
import json
import math

import pytest

import graphmass
from graphmass.cli import main

SCHWARZSCHILD = {
    "n": 3,
    "function": {"kind": "schwarzschild_radial", "n": 3, "mass": 1.0},
    "domain": {"kind": "exterior_of_star_shaped",
               "boundary": {"shape": "ball", "radius": 3.0}},
    "radii": [100.0, 1000.0, 10000.0],
    "degree": 6,
    "radial_nodes": 10,
}


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def run(cmd, cfg_path, out_dir, *extra):
    return main([cmd, "--config", cfg_path, "--out", str(out_dir), *extra])


def test_mass_command_end_to_end(tmp_path, capsys):
    cfg = write_config(tmp_path, SCHWARZSCHILD)
    out = tmp_path / "out"
    assert run("mass", cfg, out) == 0
    assert "surface mass" in capsys.readouterr().out

    env = json.loads((out / "mass_report.json").read_text())
    assert env["version"] == graphmass.__version__
    assert env["command"] == "mass"
    assert len(env["config_sha256"]) == 64
    assert env["config"]["function"]["kind"] == "schwarzschild_radial"
    rep = env["report"]
    assert rep["total_bulk_boundary"] == pytest.approx(1.0, abs=1e-10)
    assert rep["mass_value"] == pytest.approx(1.0, abs=1e-10)
    assert rep["bulk_converged"] is True
    assert rep["inequality_verdicts"]["alexandrov_fenchel_label"] == \
        "sphere (equality)"

    raw = (out / "mass_series.csv").read_bytes()
    assert b"\r\n" in raw
    rows = list(csv.reader(raw.decode("ascii").splitlines()))
    assert rows[0] == ["radius", "surface_estimate"]
    assert len(rows) == 4
    assert float(rows[1][0]) == 100.0
    # %.17g round-trips doubles exactly
    assert float(rows[1][1]) == rep["surface_estimates"][0]


def test_reports_are_byte_identical_across_runs(tmp_path):
    cfg = write_config(tmp_path, SCHWARZSCHILD)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run("mass", cfg, out1) == 0
    assert run("mass", cfg, out2) == 0
    for name in ("mass_report.json", "mass_series.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_malformed_json_reports_byte_offset(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3, oops}', encoding="utf-8")
    assert run("mass", str(path), tmp_path) == 1
    err = capsys.readouterr().err
    assert "config error" in err
    assert "byte 9" in err


def test_missing_required_field(tmp_path, capsys):
    cfg = write_config(tmp_path, {"function": "x1"})
    assert run("mass", cfg, tmp_path) == 1
    assert "n: required" in capsys.readouterr().err


def test_unsorted_radii_rejected(tmp_path, capsys):
    bad = dict(SCHWARZSCHILD, radii=[100.0, 50.0, 1000.0])
    cfg = write_config(tmp_path, bad)
    assert run("mass", cfg, tmp_path) == 1
    assert "ascending" in capsys.readouterr().err


def test_precondition_violation_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": "sin(x1/10) + sin(x2/7)",   # curvature does not decay
        "degree": 4,
        "radial_nodes": 8,
    })
    assert run("mass", cfg, tmp_path) == 3
    assert "precondition violated" in capsys.readouterr().err


def test_verify_continues_past_domain_errors(tmp_path):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": {"kind": "schwarzschild_radial", "n": 3, "mass": 1.0},
        "points": 24,
        "seed": 5,
        "sample_r_min": 1.0,     # straddles the inner boundary at r = 2
        "sample_r_max": 4.0,
    })
    out = tmp_path / "out"
    assert run("verify", cfg, out) == 0
    body = json.loads((out / "verify_report.json").read_text())["report"]
    assert body["domain_errors"], "expected some points inside r0"
    assert body["points_used"] + len(body["domain_errors"]) == 24
    assert body["points_used"] > 0
    idents = body["identities"]
    assert idents["frame_duality"]["max"] < 1e-12
    assert idents["normal_scalar_routes"]["max"] < 1e-12
    assert idents["divergence"]["max"] is not None


def test_verify_residuals_and_fd_order(tmp_path):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": [{"kind": "expression", "text": "exp(-(x1^2+x2^2+x3^2))"},
                     {"kind": "expression",
                      "text": "x1*exp(-(x1^2+x2^2+x3^2))"}],
        "points": 16,
        "seed": 11,
        "sample_r_min": 0.3,
        "sample_r_max": 1.5,
    })
    out = tmp_path / "out"
    assert run("verify", cfg, out) == 0
    body = json.loads((out / "verify_report.json").read_text())["report"]
    assert body["points_used"] == 16
    idents = body["identities"]
    for name in ("frame_duality", "contraction_mixed", "contraction_weighted",
                 "contraction_double", "sym_antisym", "normal_scalar_routes"):
        assert idents[name]["max"] < 1e-12, name
    for name in ("contraction_trace", "commutator_remainder",
                 "gauss_vs_intrinsic", "divergence"):
        assert idents[name]["max"] < 1e-5, name
    assert body["fd_order"] > 1.8


def test_penrose_command_near_equality(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": {"kind": "schwarzschild_radial", "n": 3, "mass": 1.0},
        "domain": {"kind": "exterior_of_star_shaped",
                   "boundary": {"shape": "ball", "radius": 2.000002}},
        "radii": [100.0, 1000.0, 10000.0],
        "degree": 6,
        "radial_nodes": 10,
    })
    out = tmp_path / "out"
    assert run("penrose", cfg, out) == 0
    body = json.loads((out / "penrose_report.json").read_text())["report"]
    assert body["penrose"]["ratio"] == pytest.approx(1.0, abs=1e-3)
    assert body["penrose"]["label"] == "equality case"
    assert "equality case" in capsys.readouterr().out


def test_penrose_command_flat_ellipsoid(tmp_path):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": {"kind": "zero", "n": 3, "m": 1},
        "domain": {"kind": "exterior_of_star_shaped",
                   "boundary": {"shape": "ellipsoid",
                                "semi_axes": [1.0, 1.25, 0.85]}},
        "degree": 24,
        "radial_nodes": 8,
    })
    out = tmp_path / "out"
    assert run("penrose", cfg, out) == 0
    body = json.loads((out / "penrose_report.json").read_text())["report"]
    assert body["mass"] == 0.0
    assert body["penrose"]["label"] == "hypotheses violated"
    af = body["alexandrov_fenchel"]
    assert af["gap"] > 1e-4
    assert af["label"] == "satisfied"


def test_penrose_needs_boundary(tmp_path, capsys):
    cfg = write_config(tmp_path, {"n": 3, "function": "0"})
    assert run("penrose", cfg, tmp_path) == 1
    assert "boundary" in capsys.readouterr().err


def test_decay_command(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": {"kind": "schwarzschild_radial", "n": 3, "mass": 1.0},
        "decay_radii": [10.0, 100.0, 1000.0, 10000.0],
    })
    out = tmp_path / "out"
    assert run("decay", cfg, out) == 0
    body = json.loads((out / "decay_report.json").read_text())["report"]
    assert body["flat_verdict"] is True
    assert body["p_est"] == pytest.approx(1.0, abs=0.05)
    assert body["q_est"] == 99.0
    assert body["thresholds"] == {"p": 0.5, "q": 3.0}
    assert "asymptotically flat: True" in capsys.readouterr().out


def test_decay_rejects_narrow_radii(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": "0",
        "decay_radii": [10.0, 20.0, 40.0],
    })
    assert run("decay", cfg, tmp_path) == 1
    assert "decades" in capsys.readouterr().err


def test_command_line_overrides_recorded(tmp_path):
    cfg = write_config(tmp_path, SCHWARZSCHILD)
    out = tmp_path / "out"
    assert run("mass", cfg, out, "--radii", "50,500,5000",
               "--degree", "4") == 0
    env = json.loads((out / "mass_report.json").read_text())
    assert env["config"]["radii"] == [50.0, 500.0, 5000.0]
    assert env["config"]["degree"] == 4
    assert [row[0] for row in csv.reader(
        (out / "mass_series.csv").read_text().splitlines())][1:] == \
        ["50", "500", "5000"]


def test_zero_function_report_is_all_zero(tmp_path):
    cfg = write_config(tmp_path, {
        "n": 3,
        "function": {"kind": "zero", "n": 3, "m": 2},
        "radii": [10.0, 100.0, 1000.0],
        "degree": 4,
        "radial_nodes": 8,
    })
    out = tmp_path / "out"
    assert run("mass", cfg, out) == 0
    rep = json.loads((out / "mass_report.json").read_text())["report"]
    assert rep["surface_estimates"] == [0.0, 0.0, 0.0]
    assert rep["bulk_mass"] == 0.0
    assert rep["total_bulk_boundary"] == 0.0
    assert rep["inequality_verdicts"] == {}
    assert rep["penrose_rhs"] is None    # NaN serializes as null


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert f"graphmass {graphmass.__version__}" in capsys.readouterr().out
