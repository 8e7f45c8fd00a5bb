"""Round-trip checks of the photonfluid command-line tool."""

import csv
import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("PHOTONFLUID_BIN", "photonfluid")


def run(*args, cwd, env=None, expect=0):
    proc = subprocess.run([BIN, *map(str, args)], cwd=cwd, capture_output=True, text=True, env=env)
    assert proc.returncode == expect, (proc.returncode, proc.stdout, proc.stderr)
    return proc


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    assert lines[0].startswith("# config_digest: ")
    return lines[0].split(": ")[1], list(csv.DictReader(lines[1:]))


def manifest(path):
    return json.loads((Path(path) / "manifest.json").read_text())


def test_dispersion_defaults(tmp_path):
    run("dispersion", "-o", "d", cwd=tmp_path)
    m = manifest(tmp_path / "d")
    for beta in ("1", "2", "3"):
        digest, rows = read_csv(tmp_path / "d" / f"dispersion_beta_{beta}.csv")
        assert digest == m["config_digest"]
        assert len(rows) == 401
        assert list(rows[0])[:4] == ["Q", "beta", "re_root_1", "re_root_2"]
    _, rows = read_csv(tmp_path / "d" / "dispersion_beta_3.csv")
    unstable = [float(r["Q"]) for r in rows if float(r["growth"]) > 0]
    assert min(unstable) > 5 ** 0.5 and max(unstable) < 3
    assert m["summary"]["bands"][2]["q_lo"] == pytest.approx(5 ** 0.5)


def test_dispersion_beta_zero_has_no_imaginary_part(tmp_path):
    run("dispersion", "-o", "d", "-s", "dispersion.betas=0", cwd=tmp_path)
    _, rows = read_csv(tmp_path / "d" / "dispersion_beta_0.csv")
    assert all(float(r[f"im_root_{k}"]) == 0.0 for r in rows for k in range(1, 5))


def test_usage_errors(tmp_path):
    run("dispersion", "-s", "dispersion.betas=", cwd=tmp_path, expect=2)
    run("dispersion", "-s", "dispersion.q_max=-1", cwd=tmp_path, expect=2)
    run("dispersion", "-s", "nosuch.key=1", cwd=tmp_path, expect=2)
    run("simulate", "-s", "run.v0=0.123", cwd=tmp_path, expect=2)
    run("vapor", "-s", "vapor.scan_detunings_gamma=-20,0", cwd=tmp_path, expect=2)
    run("frobnicate", cwd=tmp_path, expect=2)
    run("dispersion", "-c", "missing.ini", cwd=tmp_path, expect=4)


def test_config_precedence(tmp_path):
    (tmp_path / "c.ini").write_text("[dispersion]\nbetas = 0.5, 4\nq_points = 11\n")
    out = run("dispersion", "-c", "c.ini", "-s", "dispersion.q_points=21", "--print-config", cwd=tmp_path).stdout
    assert "betas = 0.5,4" in out
    assert "q_points = 21" in out
    run("dispersion", "-c", "c.ini", "-o", "d", cwd=tmp_path)
    assert sorted(p.name for p in (tmp_path / "d").glob("*.csv")) == ["dispersion_beta_0.5.csv", "dispersion_beta_4.csv"]


def test_stability_map_is_thread_independent(tmp_path):
    env = dict(os.environ)
    env["PHOTONFLUID_THREADS"] = "1"
    run("stability-map", "-o", "one", cwd=tmp_path, env=env)
    env["PHOTONFLUID_THREADS"] = "3"
    run("stability-map", "-o", "three", "--plot", cwd=tmp_path, env=env)
    one = (tmp_path / "one" / "stability_map.csv").read_text().splitlines()
    three = (tmp_path / "three" / "stability_map.csv").read_text().splitlines()
    assert one[1:] == three[1:]  # the digest line differs: --plot is part of the configuration
    assert manifest(tmp_path / "three")["threads"] == 3
    assert (tmp_path / "three" / "stability_map.ppm").read_bytes().startswith(b"P6")


def test_zero_step_run(tmp_path):
    run("simulate", "-o", "r", "-s", "run.z_end=0", cwd=tmp_path)
    files = sorted(p.name for p in (tmp_path / "r").iterdir())
    assert files == ["index.csv", "manifest.json", "snap_00000.e0.pfld", "snap_00000.e1.pfld", "summary.csv"]
    _, rows = read_csv(tmp_path / "r" / "index.csv")
    assert len(rows) == 1 and float(rows[0]["z"]) == 0.0


def test_simulate_is_deterministic_and_digest_tracks_parameters(tmp_path):
    small = ["-s", "run.z_end=2", "-s", "grid.nx=32", "-s", "grid.ny=8", "-s", "run.noise=1e-3"]
    run("simulate", "-o", "a", *small, cwd=tmp_path)
    run("simulate", "-o", "b", *small, cwd=tmp_path)
    run("simulate", "-o", "c", *small, "-s", "run.seed=7", cwd=tmp_path)
    ma, mb, mc = (manifest(tmp_path / d) for d in "abc")
    assert ma["config_digest"] == mb["config_digest"] != mc["config_digest"]
    assert ma["seed"] == 42 and mc["seed"] == 7
    _, ia = read_csv(tmp_path / "a" / "index.csv")
    _, ib = read_csv(tmp_path / "b" / "index.csv")
    assert [r["checksum"] for r in ia] == [r["checksum"] for r in ib]
    for name in ma["output_paths"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    # Equivalent spellings resolve to the same digest.
    run("simulate", "-o", "d", *small, "-s", "run.noise=0.001", "-s", "run.g=0.50", cwd=tmp_path)
    assert manifest(tmp_path / "d")["config_digest"] == ma["config_digest"]


def test_simulate_then_analyze(tmp_path):
    run("simulate", "-o", "r", cwd=tmp_path)
    m = manifest(tmp_path / "r")
    assert m["status"] == "ok" and m["summary"]["beta"] == 1.0
    assert abs(m["summary"]["norm_drift"]) < 1e-10
    run("analyze", "r", cwd=tmp_path)
    digest, rows = read_csv(tmp_path / "r" / "analysis" / "growth.csv")
    assert digest == manifest(tmp_path / "r" / "analysis")["config_digest"]
    assert len(rows) == 4 and all(r["fit_ok"] == "1" for r in rows)
    by_q = {float(r["Q"]): r for r in rows}
    assert abs(float(by_q[0.5]["relative_error"])) < 0.1
    assert list(read_csv(tmp_path / "r" / "analysis" / "mode_Q0.5.csv")[1][0]) == ["z", "re", "im", "abs"]
    assert (tmp_path / "r" / "analysis" / "vortices_00000.e0.csv").read_text().splitlines()[1] == "x,y,charge"
    _, census = read_csv(tmp_path / "r" / "analysis" / "vortex_census.csv")
    assert len(census) == 2 * m["summary"]["snapshots"]
    assert (tmp_path / "r" / "analysis" / "farfield_00000.pras").read_bytes()[:4] == b"PRAS"


def test_analyze_stable_run(tmp_path):
    run("simulate", "-o", "s", "-s", "run.v0=0", cwd=tmp_path)
    run("analyze", "s", cwd=tmp_path)
    _, rows = read_csv(tmp_path / "s" / "analysis" / "growth.csv")
    assert all(r["consistent_with_zero"] == "1" for r in rows)


def test_analyze_errors(tmp_path):
    (tmp_path / "empty").mkdir()
    assert "empty run directory" in run("analyze", "empty", cwd=tmp_path, expect=4).stderr
    run("simulate", "-o", "r", "-s", "run.z_end=1", "-s", "run.snapshot_every=20", cwd=tmp_path)
    (tmp_path / "r" / "snap_00002.e1.pfld").unlink()
    (tmp_path / "r" / "snap_00004.e0.pfld").unlink()
    err = run("analyze", "r", cwd=tmp_path, expect=4).stderr
    assert "snap_00002.e1.pfld" in err and "snap_00004.e0.pfld" in err


def test_numeric_failure_keeps_partial_output(tmp_path):
    run("simulate", "-o", "r", "-s", "run.g=1e300", "-s", "grid.dz=1e10", "-s", "run.z_end=1e11",
        "-s", "run.snapshot_every=1", "-s", "run.v0=0", cwd=tmp_path, expect=3)
    m = manifest(tmp_path / "r")
    assert m["status"] == "numeric_failure"
    assert m["failure_z"] == 1e10
    assert (tmp_path / "r" / "snap_00000.e0.pfld").exists()


def test_vapor_defaults(tmp_path):
    out = run("vapor", "-o", "v", cwd=tmp_path).stdout
    assert "n2_cm2_per_W: -7.755e-05" in out
    s = manifest(tmp_path / "v")["summary"]
    assert s["n2_cm2_per_W"] == pytest.approx(-7.5e-5, rel=0.15)
    assert s["saturation_intensity_W_per_cm2"] == pytest.approx(4.0, rel=0.1)
    assert abs(s["delta_n"]) == pytest.approx(3e-5, rel=0.15)
    assert s["length_scale_mm"] == pytest.approx(26.0, rel=0.15)
    _, rows = read_csv(tmp_path / "v" / "detuning_scan.csv")
    assert len(rows) == 24
