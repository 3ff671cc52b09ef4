import json
import subprocess
import sys

import numpy as np
import pytest

from qsdim.cli import main

TILING = {"disks": [{"center": -0.5, "radius": 0.5}, {"center": 0.5, "radius": 0.5}]}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")][1:]


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return {
        "tiling": write("tiling.json", TILING),
        "two": write("two.json", {"disks": [{"center": -0.5, "radius": 0.25}, {"center": 0.5, "radius": 0.25}]}),
        "gold": write("gold.json", {"disks": [{"center": -0.5, "radius": 0.5}, {"center": 0.5, "radius": 0.25}]}),
        "overlap": write("overlap.json", {"disks": [{"center": 0.0, "radius": 0.5}, {"center": 0.3, "radius": 0.5}]}),
        "broken": write("broken.json", '{"disks": [ {"center": 0.1,'),
        "measure": write("measure.json", {"probabilities": [2 / 3, 1 / 3], "ratios": [0.5, 0.5]}),
        "dir": tmp_path,
    }


def test_bounds_examples(capsys):
    code, out, _ = run(capsys, "bounds", "dist", "--delta", 0.75, "--k", "0.333333333333")
    assert code == 0 and out.splitlines()[0] == "delta,k,D,Dstar"
    d, dstar = rows(out)[0].split(",")[2:]
    assert float(d) == pytest.approx(0.489795918367, abs=2e-12) and dstar == "0.96"
    code, out, _ = run(capsys, "bounds", "dist", "--k", 0.5, "--grid", 11)
    assert [r.split(",")[0] for r in rows(out)] == ["0", "0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1"]
    assert rows(run(capsys, "bounds", "convert", "--K", 2)[1]) == ["0.333333333333"]
    assert rows(run(capsys, "bounds", "lp", "--K", 1)[1]) == ["1,inf"]
    assert rows(run(capsys, "bounds", "lp", "--K", 2)[1]) == ["2,6"]


def test_bowen_examples(capsys, files):
    assert run(capsys, "bowen", "--packing", files["two"])[1] == "dimension\n0.5\n"
    assert run(capsys, "bowen", "--packing", files["gold"])[1] == "dimension\n0.694241913631\n"
    code, _, err = run(capsys, "bowen", "--packing", files["overlap"])
    assert code == 2 and "overlap" in err


def test_spectra_examples(capsys, files):
    out = run(capsys, "spectra", "f-bound", "--K", 4, "--grid", 101)[1]
    pts = dict(tuple(map(float, r.split(","))) for r in rows(out))
    assert pts[0.64] == pytest.approx(0.64, abs=1e-12)
    assert rows(run(capsys, "spectra", "beta-bound", "--K", 2, "--t", 4)[1]) == ["4,1"]
    out = run(capsys, "spectra", "conjectured", "--k", 0.5, "--grid", 5)[1]
    assert out.startswith("# conjectural\n")
    code, _, err = run(capsys, "spectra", "quasidisk", "--k", 0.5, "--t", 1.0)
    assert code == 2 and "error" in err
    out = run(capsys, "spectra", "tau", "--measure", files["measure"], "--q", 0)[1]
    assert out.splitlines()[0] == "q,tau,alpha,f" and rows(out)[0].split(",")[1] == "1"
    out = run(capsys, "spectra", "beta-est", "--map", "identity", "--t", -1, 2)[1]
    assert all(abs(float(r.split(",")[1])) < 1e-9 for r in rows(out))
    out = run(capsys, "spectra", "f-est", "--measure", files["measure"], "--r", 2.0**-12, "--grid", 21)[1]
    assert len(rows(out)) == 21 and "nan" not in out


def test_legendre_round_trip_through_files(capsys, files):
    f_csv = str(files["dir"] / "f.csv")
    b_csv = str(files["dir"] / "b.csv")
    assert run(capsys, "spectra", "f-bound", "--K", 2, "--grid", 201, "--out", f_csv)[0] == 0
    assert run(capsys, "spectra", "legendre", "--in", f_csv, "--direction", "f_to_beta", "--out", b_csv)[0] == 0
    code, out, _ = run(capsys, "spectra", "legendre", "--in", b_csv, "--direction", "beta_to_f")
    assert code == 0
    back = np.array([list(map(float, r.split(","))) for r in rows(out)])
    src = np.array([list(map(float, r.split(","))) for r in rows(open(f_csv).read())])
    fin = np.isfinite(src[:, 1])
    vals = np.interp(src[fin, 0], back[:, 0], back[:, 1])
    assert np.max(np.abs(vals - src[fin, 1])) < 0.05


def test_verify_reports(capsys, files):
    code, out, _ = run(capsys, "verify", "blaschke", "--samples", 2000, "--seed", 7)
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == 0 and rep["seed"] == 7 and rep["samples"] == 2000
    assert {"violations", "worst_margin", "samples", "seed"} <= set(rep)
    code, out, _ = run(capsys, "verify", "threepoint", "--samples", 500)
    assert code == 0 and json.loads(out)["violations"] == 0
    code, out, _ = run(capsys, "verify", "blaschke", "--samples", 200, "--tol", -1)
    assert code == 1 and json.loads(out)["violations"] > 0
    code, out, _ = run(capsys, "verify", "packing", "--packing", files["tiling"], "--k", 0.3333, "--delta", 1.0,
                       "--rho", 0.9, "--a", 1.0)
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_verify_phi(capsys, files):
    code, out, _ = run(capsys, "verify", "phi", "--packing", files["tiling"], "--rho", 0.9, "--qs-samples", 20000)
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == 0
    code, _, err = run(capsys, "verify", "phi", "--packing", files["tiling"], "--delta", 1.0, "--rho", 0.9,
                       "--qs-samples", 20000)
    assert code == 2 and "hypothesis" in err
    code, out, _ = run(capsys, "verify", "phi", "--packing", files["tiling"], "--delta", 1.0, "--a", 1.0)
    assert code == 1 and json.loads(out)["violations"] > 0


def test_input_errors(capsys, files):
    assert run(capsys, "bowen", "--packing", files["broken"])[0] == 2
    assert run(capsys, "bowen", "--packing", str(files["dir"] / "missing.json"))[0] == 2
    assert run(capsys, "bounds", "dist", "--delta", 0.5, "--k", 2)[0] == 2
    assert run(capsys, "bounds", "dist", "--k", 0.5)[0] == 2
    assert run(capsys, "bounds", "convert", "--k", 0.1, "--K", 2)[0] == 2
    for argv in (["bounds", "foo"], ["bounds", "lp"], ["nonsense"], ["bounds", "lp", "--K", "x"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_json_format_and_out(capsys, files):
    code, out, _ = run(capsys, "bounds", "lp", "--K", 1, "--format", "json")
    assert json.loads(out) == {"columns": ["K", "p"], "rows": [[1.0, "inf"]]}
    path = files["dir"] / "o.csv"
    code, out, _ = run(capsys, "bounds", "convert", "--k", 0.5, "--out", path)
    assert code == 0 and out == "" and path.read_text() == "K\n3\n"


def test_determinism_subprocess(files):
    argv = [sys.executable, "-m", "qsdim", "verify", "phi", "--packing", files["tiling"], "--qs-samples", "8192"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout
