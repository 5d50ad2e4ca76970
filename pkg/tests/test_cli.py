import json
import subprocess
import sys

import pytest

from chebapprox import cli
from chebapprox.lp import NumericFailure


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_univariate_parabola(capsys):
    code, out, _ = run_cli(
        ["solve", "--function", "x^2", "--degree", "1", "--domain", "grid:[-1,1]:3"],
        capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["t_star"] == pytest.approx(0.5, abs=1e-12)
    assert payload["coefficients"][0] == pytest.approx(0.5, abs=1e-12)


def test_solve_builtin_disk(capsys):
    code, out, _ = run_cli(["solve", "--builtin", "disk-sextic-deg2"], capsys)
    assert code == 0
    assert json.loads(out)["t_star"] == pytest.approx(2.0, abs=1e-8)


def test_solve_2d_grid_spec(capsys):
    code, out, _ = run_cli(
        ["solve", "--function", "x*y", "--degree", "2",
         "--domain", "grid:[-1,1],[-1,1]:5"], capsys)
    assert code == 0
    assert json.loads(out)["t_star"] == pytest.approx(0.0, abs=1e-9)


def test_solve_missing_values_column(tmp_path, capsys):
    bad = tmp_path / "samples.csv"
    bad.write_text("x,y\n0,0\n1,1\n")
    code, _, err = run_cli(["solve", "--samples", str(bad), "--degree", "1"], capsys)
    assert code == 2
    assert "value column" in err


def test_solve_samples_roundtrip(tmp_path, capsys):
    samples = tmp_path / "samples.csv"
    samples.write_text("x,f\n-1,1\n0,0\n1,1\n")
    code, out, _ = run_cli(["solve", "--samples", str(samples), "--degree", "1"], capsys)
    assert code == 0
    assert json.loads(out)["t_star"] == pytest.approx(0.5, abs=1e-12)


def test_solve_two_sources_rejected(capsys):
    code, _, err = run_cli(
        ["solve", "--function", "x", "--builtin", "disk-sextic-deg2",
         "--degree", "1", "--domain", "grid:[-1,1]:3"], capsys)
    assert code == 2
    assert "exactly one" in err


def test_solve_csv_format(capsys):
    code, out, _ = run_cli(
        ["solve", "--function", "x^2", "--degree", "1", "--domain", "grid:[-1,1]:3",
         "--format", "csv"], capsys)
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "t_star,c0,c1"
    assert [float(v) for v in row.split(",")] == [0.5, 0.5, 0.0]


def test_solve_exact_flag(capsys):
    code, out, _ = run_cli(
        ["solve", "--function", "x^2", "--degree", "1", "--domain", "grid:[-1,1]:3",
         "--exact"], capsys)
    assert code == 0
    assert json.loads(out)["t_star"] == 0.5


def test_solve_deterministic_output(tmp_path):
    args = ["solve", "--builtin", "bump-sharp-hex", "--output"]
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert cli.main(args + [str(out1)]) == 0
    assert cli.main(args + [str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def _write_q1(tmp_path):
    path = tmp_path / "q1.json"
    path.write_text(json.dumps([-2.0, 0.0, 0.0, 3.0, 0.0, 3.0]))
    return str(path)


def test_certify_optimal_candidate(tmp_path, capsys):
    code, out, _ = run_cli(
        ["certify", "--builtin", "disk-sextic-deg2", "--candidate", _write_q1(tmp_path)],
        capsys)
    assert code == 0
    assert json.loads(out)["verdict"] == "optimal"


def test_certify_zero_candidate_witness(tmp_path, capsys):
    zero = tmp_path / "zero.json"
    zero.write_text(json.dumps([0.0] * 6))
    code, out, _ = run_cli(
        ["certify", "--builtin", "disk-sextic-deg2", "--candidate", str(zero)], capsys)
    assert code == 1
    payload = json.loads(out)
    assert payload["verdict"] == "suboptimal"
    assert len(payload["witness"]) == 6
    assert payload["descent_drop"] > 0


def test_certify_malformed_candidate(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([1.0, 2.0]))
    code, _, err = run_cli(
        ["certify", "--builtin", "disk-sextic-deg2", "--candidate", str(bad)], capsys)
    assert code == 2
    assert "coefficients" in err


def test_dimensions_builtin(capsys):
    code, out, _ = run_cli(["dimensions", "--builtin", "bump-sharp-hex"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["dim_q"] == 1 and payload["dim_s"] == 1
    assert len(payload["essential_neg"]["indices"]) == 3


def test_dimensions_exact_fit(capsys):
    code, out, _ = run_cli(
        ["dimensions", "--function", "1+x", "--degree", "1", "--domain", "grid:[-1,1]:5"],
        capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["dim_q"] == 0 and payload["dim_s"] == 0


def test_numeric_failure_maps_to_exit_3(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise NumericFailure("stalled")
    monkeypatch.setattr(cli, "solve_minimax", boom)
    code, _, err = run_cli(
        ["solve", "--function", "x", "--degree", "1", "--domain", "grid:[0,1]:3"], capsys)
    assert code == 3
    assert "stalled" in err


def _hexagon_files(tmp_path):
    import math
    s = math.sqrt(3) / 2
    npath = tmp_path / "neg.csv"
    ppath = tmp_path / "pos.csv"
    npath.write_text("1,0\n-0.5,{s}\n-0.5,-{s}\n".format(s=s))
    ppath.write_text("0.5,{s}\n-1,0\n0.5,-{s}\n".format(s=s))
    return str(npath), str(ppath)


def test_bump_hexagon(tmp_path, capsys):
    npath, ppath = _hexagon_files(tmp_path)
    code, out, _ = run_cli(
        ["bump", "--N", npath, "--P", ppath, "--variant", "sharp",
         "--domain", "disk:0,0:2:8:24", "--degree", "2"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["dimensions"]["dim_q"] == 1
    assert payload["dimensions"]["dim_s"] == 1
    assert payload["spec"]["variant"] == "sharp"


def test_bump_separable_warns_but_succeeds(tmp_path, capsys):
    npath = tmp_path / "n.csv"
    ppath = tmp_path / "p.csv"
    npath.write_text("0\n")
    ppath.write_text("1\n")
    with pytest.warns(UserWarning, match="separable"):
        code, out, _ = run_cli(
            ["bump", "--N", str(npath), "--P", str(ppath), "--variant", "sharp",
             "--domain", "grid:[-1,2]:13", "--degree", "1"], capsys)
    assert code == 0


def test_bump_overlapping_sets_exit_2(tmp_path, capsys):
    npath = tmp_path / "n.csv"
    ppath = tmp_path / "p.csv"
    npath.write_text("0,0\n")
    ppath.write_text("0,0\n1,0\n")
    code, _, err = run_cli(
        ["bump", "--N", str(npath), "--P", str(ppath),
         "--domain", "grid:[-1,1],[-1,1]:5", "--degree", "1"], capsys)
    assert code == 2


def test_reproduce_unknown_id(capsys):
    code, _, err = run_cli(["reproduce", "--id", "nope"], capsys)
    assert code == 2
    assert "unknown instance" in err


def test_reproduce_single_id(capsys):
    code, out, _ = run_cli(["reproduce", "--id", "bump-smooth-hex"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["all_passed"] is True


def test_reproduce_sweep_csv(capsys):
    code, out, _ = run_cli(
        ["reproduce", "--id", "bump-smooth-hex", "--resolution", "sweep"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "id,spacing,step_down,step_up"
    assert len(lines) == 4
    ups = [float(ln.split(",")[3]) for ln in lines[1:]]
    assert ups[0] > ups[1] > ups[2] > 0


def test_plotdata_disk_with_candidate(tmp_path, capsys):
    out_path = tmp_path / "surface.csv"
    code, _, _ = run_cli(
        ["plotdata", "--builtin", "disk-sextic-deg2",
         "--candidate", _write_q1(tmp_path), "--output", str(out_path)], capsys)
    assert code == 0
    sets_path = tmp_path / "surface_sets.csv"
    lines = sets_path.read_text().strip().splitlines()
    assert lines[0] == "x1,x2,set"
    pts = {(round(float(a), 6), round(float(b), 6), s)
           for a, b, s in (ln.split(",") for ln in lines[1:])}
    # with the second optimum the scatter holds the hexagon plus the origin
    assert len(pts) == 7
    assert (0.0, 0.0, "P") in pts


def test_plotdata_relint_sets_are_hexagon(tmp_path, capsys):
    out_path = tmp_path / "surface.csv"
    code, _, _ = run_cli(
        ["plotdata", "--builtin", "disk-sextic-deg2", "--output", str(out_path)], capsys)
    assert code == 0
    lines = (tmp_path / "surface_sets.csv").read_text().strip().splitlines()
    assert len(lines) == 7    # header + six hexagon vertices
    surface = out_path.read_text().strip().splitlines()
    assert surface[0] == "x1,x2,f,q,dev"
    assert len(surface) == 1 + 193


def test_plotdata_square_h_edges(tmp_path, capsys):
    qfile = tmp_path / "qhalf.json"
    qfile.write_text(json.dumps([0.0, 0.0, 0.5]))
    out_path = tmp_path / "h.csv"
    code, _, _ = run_cli(
        ["plotdata", "--builtin", "square-h-linear", "--candidate", str(qfile),
         "--output", str(out_path)], capsys)
    assert code == 0
    rows = [ln.split(",") for ln in out_path.read_text().strip().splitlines()[1:]]
    for cells in rows:
        x, y, dev = float(cells[0]), float(cells[1]), float(cells[3])
        if abs(abs(x) - 1.0) < 1e-12 and -1.0 <= y <= 0.0:
            dev_val = float(cells[4])
            assert abs(dev_val - 0.5) < 1e-9


def test_plotdata_requires_output(capsys):
    code, _, err = run_cli(["plotdata", "--builtin", "bump-sharp-hex"], capsys)
    assert code == 2
    assert "--output" in err


def test_plotdata_missing_domain_file(capsys):
    code, _, err = run_cli(
        ["plotdata", "--function", "x", "--degree", "1",
         "--domain", "/nonexistent/file.csv", "--output", "/tmp/x.csv"], capsys)
    assert code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chebapprox.cli", "solve", "--function", "x^2",
         "--degree", "0", "--domain", "grid:[-1,1]:5"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["t_star"] == pytest.approx(0.5, abs=1e-12)
