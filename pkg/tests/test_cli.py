import json
import subprocess
import sys

import pytest

from projcurv.cli import main
from projcurv.polynomial import dumps, fermat


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_total_line(capsys):
    code, out, _ = run(capsys, "total", "--poly", "z1", "--ambient-dim", "2", "--samples", "2048")
    assert code == 0
    rep = json.loads(out)
    assert rep["T"] == pytest.approx(2.0, abs=1e-6)
    for key in ("schema_version", "polynomial", "degree", "ambient_dim", "method", "std_error",
                "samples", "rejected_fraction", "seed", "unitary_rotation", "error_model",
                "wall_time"):
        assert key in rep
    assert rep["method"] == "curve_closed_form"


def test_total_from_json_file_csv(capsys, tmp_path):
    path = tmp_path / "conic.json"
    path.write_text(dumps(fermat(2)))
    out_path = tmp_path / "out.csv"
    code, _, _ = run(capsys, "total", "--input", str(path), "--samples", "1024",
                     "--method", "area_only", "--format", "csv", "--out", str(out_path))
    assert code == 0
    header, row = out_path.read_text().strip().splitlines()
    assert "T" in header.split(",") and "area_only" in row


def test_total_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(capsys, "total", "--input", str(bad))[0] == 2
    assert run(capsys, "total", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "total", "--poly", "z0^2 + z1", "--samples", "1000")[0] == 2
    assert run(capsys, "total", "--poly", "z0^2+z1^2+z2^2", "--samples", "10")[0] == 2
    assert run(capsys, "total")[0] == 2
    assert run(capsys, "total", "--poly", "z0^2+z1^2+z2^2", "--method", "bogus")[0] == 2


def test_spectrum_conic(capsys):
    code, out, _ = run(capsys, "spectrum", "--poly", "z0^2 + z1^2 + z2^2", "--point", "1,1i,0",
                       "--theta", "0.7")
    assert code == 0
    rep = json.loads(out)
    assert rep["kappas"] == pytest.approx([1.0], abs=1e-10)
    assert rep["holomorphic_sectional_curvatures"] == pytest.approx([2.0], abs=1e-9)


def test_spectrum_errors(capsys):
    assert run(capsys, "spectrum", "--poly", "z0^2+z1^2+z2^2", "--point", "1,0,0")[0] == 2
    assert run(capsys, "spectrum", "--poly", "z0^2+z1^2+z2^2", "--point", "1,x")[0] == 2
    assert run(capsys, "spectrum", "--poly", "z0*z1", "--ambient-dim", "2", "--point", "0,0,1")[0] == 3


def test_spectrum_random_point(capsys):
    code, out, _ = run(capsys, "spectrum", "--poly", "z0^3 + z1^3 + z2^3", "--seed", "4")
    assert code == 0 and json.loads(out)["pairing_residual"] < 1e-8


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--degree", "3", "--total", "10.94")
    rep = json.loads(out)
    assert code == 0
    assert rep["betti"] == [1, 2, 1] and rep["lift_betti"] == [1, 2, 2, 1]
    assert rep["interval"] == [10, 18]
    assert all(c["passed"] for c in rep["checks"])
    code, out, _ = run(capsys, "bounds", "--betti", "1,0,2,0,1", "--total", "4")
    assert json.loads(out)["lift_betti"] == [1, 0, 1, 1, 0, 1]
    assert run(capsys, "bounds", "--betti", "1,2")[0] == 2
    assert run(capsys, "bounds", "--betti", "1,a,1")[0] == 2
    assert run(capsys, "bounds")[0] == 2
    assert run(capsys, "bounds", "--degree", "3", "--dim", "3")[0] == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--total", "22.99")
    assert code == 0 and json.loads(out)["degree"] == 4
    code, _, err = run(capsys, "classify", "--total", "51")
    assert code == 2 and "gap" in err
    assert run(capsys, "classify", "--total", "1")[0] == 2


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_version_and_usage(capsys):
    assert run(capsys, "--version")[0] == 0
    assert run(capsys)[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "projcurv", "classify", "--total", "4"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["degree"] == 2


def test_verify_quick_suite(capsys):
    code, out, err = run(capsys, "verify", "--suite", "quick")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert err.count("[PASS]") == len(rep["criteria"])
