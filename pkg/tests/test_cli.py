"""Command-line front end: subcommands, file schemas, exit codes."""

import json
import math

import numpy as np
import pytest

from magsurf.cli import main, parse_kappa

pytestmark = pytest.mark.usefixtures("in_tmp_dir")


@pytest.fixture
def in_tmp_dir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def _read_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    assert "\r" not in text  # LF endings only
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    rows = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    return header, rows


def test_list_surfaces(capsys):
    assert main(["list-surfaces"]) == 0
    out = capsys.readouterr().out
    for name in ("sphere", "clifford-torus", "catenoid", "enneper",
                 "maximal-enneper", "cycloid-rev"):
        assert name in out


def test_parse_kappa():
    assert parse_kappa("zero")(1.0, 2.0) == 0.0
    assert parse_kappa("const:2.5")(0.0, 0.0) == 2.5
    assert parse_kappa("sin-u")(math.pi / 2, 0.0) == pytest.approx(1.0)
    assert parse_kappa("sin-u:3")(math.pi / 2, 0.0) == pytest.approx(3.0)


def test_integrate_writes_csv_and_manifest(tmp_path):
    code = main(["integrate", "--surface", "sphere", "--kappa", "sin-u",
                 "--init", "0.2,0,0.3,0.9", "--t-end", "60", "--out", "run",
                 "--gnuplot"])
    assert code == 0
    header, rows = _read_csv("run.csv")
    assert header == ["t", "u", "v", "x", "y", "z", "speed_sq", "drift"]
    manifest = json.loads((tmp_path / "run.json").read_text())
    assert manifest["surface"] == "sphere"
    assert manifest["stop_reason"] == "reached-end"
    assert manifest["drift_max"] <= 1e-8
    assert manifest["sample_count"] == rows.shape[0]
    # every row satisfies speed_sq = c within the recorded drift
    c = manifest["c"]
    assert np.all(np.abs(rows[:, 6] - c) <= (manifest["drift_max"] + 1e-15) * c)
    assert np.all(rows[:, 7] <= manifest["drift_max"] + 1e-15)
    # ambient column matches the sphere chart
    u, v = rows[5, 1], rows[5, 2]
    assert rows[5, 3] == pytest.approx(math.cos(u) * math.cos(v), abs=1e-12)
    assert (tmp_path / "run.gp").exists()


def test_manifest_roundtrip_reproduces_csv(tmp_path):
    main(["integrate", "--surface", "sphere", "--kappa", "sin-u",
          "--init", "0.2,0,0.3,0.9", "--t-end", "20", "--out", "a"])
    code = main(["integrate", "--config", "a.json", "--out", "b"])
    assert code == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_config_file_with_dotted_sections(tmp_path):
    (tmp_path / "run.cfg").write_text(
        "# geodesic on the torus\n"
        "run.surface = clifford-torus\n"
        "run.kappa = zero\n"
        "run.init = 0,0,0,0.41421356\n"
        "integrator.t_end = 5\n"
        "integrator.rel_tol = 1e-9\n"
    )
    assert main(["integrate", "--config", "run.cfg", "--out", "t"]) == 0
    manifest = json.loads((tmp_path / "t.json").read_text())
    assert manifest["surface"] == "clifford-torus"
    assert manifest["rel_tol"] == 1e-9
    # flags override file values
    assert main(["integrate", "--config", "run.cfg", "--t-end", "2",
                 "--out", "t2"]) == 0
    assert json.loads((tmp_path / "t2.json").read_text())["t_end"] == 2.0


def test_config_errors_exit_2(capsys):
    assert main(["integrate", "--surface", "nope", "--init", "0,0,1,0",
                 "--t-end", "1"]) == 2
    assert "sphere" in capsys.readouterr().err  # diagnostic names the catalog
    assert main(["integrate", "--surface", "sphere", "--t-end", "1"]) == 2
    assert main(["integrate", "--surface", "sphere", "--init", "0,0,1",
                 "--t-end", "1"]) == 2
    assert main(["integrate", "--surface", "sphere", "--init", "0,0,0,1",
                 "--t-end", "1", "--kappa", "wavelet:3"]) == 2


def test_degenerate_stop_exits_3(tmp_path):
    code = main(["integrate", "--surface", "maximal-enneper", "--kappa", "zero",
                 "--init", "0.5,0,1,0", "--t-end", "5", "--out", "deg"])
    assert code == 3
    manifest = json.loads((tmp_path / "deg.json").read_text())
    assert manifest["stop_reason"] == "degenerate-point"  # still exported


def test_shoot_sphere(tmp_path):
    code = main(["shoot", "--surface", "sphere", "--kappa", "const:1",
                 "--family", "angle:0.3,0,0.2,0.9", "--horizon", "8",
                 "--out", "orb"])
    assert code == 0
    report = json.loads((tmp_path / "orb.json").read_text())
    assert report["position_residual"] <= 1e-6
    assert report["length"] == pytest.approx(math.pi * math.sqrt(2), abs=1e-5)
    assert (tmp_path / "orb.csv").exists()


def test_shoot_bracket_failure_exits_4():
    code = main(["shoot", "--surface", "sphere", "--kappa", "zero",
                 "--family", "angle:0,0,1.5707963,1.5707963", "--horizon", "5",
                 "--out", "orbx"])
    assert code == 4  # equator does not self-intersect within the horizon


def test_singular_worked_cases(tmp_path, capsys):
    assert main(["singular", "--hessian", "0,1,0", "--gradient", "1,0",
                 "--out", "s1"]) == 0
    rep = json.loads((tmp_path / "s1.json").read_text())
    assert rep["angles"] == pytest.approx(
        [0.0, math.pi / 2, math.pi, 3 * math.pi / 2], abs=1e-12)
    assert rep["lightlike_pair"] == pytest.approx([0.0, math.pi], abs=1e-12)

    assert main(["singular", "--hessian", "1,0,1", "--out", "s2"]) == 0
    rep = json.loads((tmp_path / "s2.json").read_text())
    assert rep["case"] == "no-real-roots"
    assert rep["angles"] == pytest.approx([0.0, math.pi], abs=1e-12)

    # sorted, in [0, 2pi)
    assert main(["singular", "--hessian=-1,0.3,1", "--out", "s3"]) == 0
    rep = json.loads((tmp_path / "s3.json").read_text())
    a = rep["angles"]
    assert a == sorted(a)
    assert all(0.0 <= x < 2 * math.pi for x in a)

    assert main(["singular", "--hessian", "0,0,0"]) == 5
    assert main(["singular", "--hessian", "1,0,1", "--gradient", "0.5,0"]) == 5
    assert main(["singular"]) == 2


def test_singular_fan(tmp_path):
    code = main(["singular", "--chart-point", "1,0", "--fan", "6",
                 "--offset", "0.1", "--kappa", "zero", "--out", "f"])
    assert code == 0
    lines = (tmp_path / "f_fan.csv").read_text().strip().split("\n")
    header = lines[0].split(",")
    assert header[:3] == ["angle", "stop_reason", "closest_distance"]
    assert len(lines) == 7  # header + one row per ray
    for ln in lines[1:]:
        fields = ln.split(",")
        assert fields[1] in ("degenerate-point", "reached-end", "step-underflow")
        assert float(fields[2]) > 0.0


def test_validate_command(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 5
    assert "FAIL" not in out


def test_csv_float_fidelity(tmp_path):
    """17 significant digits reproduce the binary doubles exactly."""
    main(["integrate", "--surface", "sphere", "--kappa", "const:0.3",
          "--init", "0.1,0.2,0.5,0.7", "--t-end", "3", "--out", "fid"])
    from magsurf.dynamics import ParamState
    from magsurf.integrate import IntegratorConfig, integrate
    from magsurf.surfaces import KappaField, get_surface

    traj = integrate(get_surface("sphere"), KappaField.constant(0.3),
                     ParamState(0, 0.1, 0.2, 0.5, 0.7),
                     IntegratorConfig(t_end=3.0))
    _, rows = _read_csv("fid.csv")
    assert rows.shape[0] == len(traj)
    np.testing.assert_array_equal(rows[:, 0], traj.t)
    np.testing.assert_array_equal(rows[:, 1], traj.y[:, 0])
    np.testing.assert_array_equal(rows[:, 3], traj.ambient[:, 0])
