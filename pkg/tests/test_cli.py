import json
import subprocess
import sys

import pytest

from doomsday_sim.cli import main

EXAMPLE = "c two solutions\np cnf 2 2\n1 -2 0\n-1 2 0\n"
UNSAT = "p cnf 1 2\n1 0\n-1 0\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in (("ex", EXAMPLE), ("unsat", UNSAT), ("bad", "p cnf 1 1\n2 0\n")):
        paths[name] = tmp_path / f"{name}.cnf"
        paths[name].write_text(text)
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_postselect_structured(files, capsys):
    code, out, _ = run(capsys, "--input", files["ex"], "--mode", "postselect", "--seed", 7, "--format", "structured")
    assert code == 0
    report = json.loads(out)
    assert report["p_alive"] == 0.5 and '"p_alive": 0.5' in out
    assert report["solution"] in {"00", "11"} and report["verified"] == 1
    assert report["gate_total"] == 9


def test_unsat_exit_code(files, capsys):
    code, out, err = run(capsys, "--input", files["unsat"], "--mode", "postselect")
    assert code == 2 and out == ""
    assert err.strip() == "error: all branches observer-free: instance unsatisfiable"


def test_parse_error_exit_code(files, capsys):
    code, _, err = run(capsys, "--input", files["bad"])
    assert code == 1
    assert err.startswith("error:") and "line 2" in err


def test_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "--input", tmp_path / "nope.cnf")
    assert code == 1 and err.startswith("error:")


def test_montecarlo_structured(files, capsys):
    code, out, _ = run(capsys, "--input", files["ex"], "--mode", "montecarlo", "--trials", 1000, "--seed", 1,
                       "--format", "structured")
    assert code == 0
    assert '"expected_runs": 2.0' in out
    report = json.loads(out)
    assert report["trials"] == 1000 and report["survived_trials"] == 1000


def test_montecarlo_unsat_reports_instead_of_failing(files, capsys):
    code, out, _ = run(capsys, "--input", files["unsat"], "--mode", "montecarlo", "--trials", 10, "--max-runs", 7,
                       "--format", "structured")
    report = json.loads(out)
    assert code == 0
    assert report["survived_trials"] == 0 and report["dead_branch_total"] == 70
    assert report["expected_runs"] is None


def test_dump_slice_only_in_postselect(files, capsys):
    code, _, err = run(capsys, "--input", files["ex"], "--mode", "montecarlo", "--dump-slice", "A")
    assert code == 1 and "dump-slice" in err


@pytest.mark.parametrize("which, rows", [
    ("A", ["0 000 0.5 0", "2 010 0.5 0", "4 100 0.5 0", "6 110 0.5 0"]),
    ("B", ["1 001 0.5 0", "2 010 0.5 0", "4 100 0.5 0", "7 111 0.5 0"]),
])
def test_dump_slices(files, capsys, which, rows):
    code, out, _ = run(capsys, "--input", files["ex"], "--dump-slice", which, "--format", "structured")
    assert code == 0
    assert json.loads(out)["slice_dump"] == rows


def test_dump_slice_c_human(files, capsys):
    code, out, _ = run(capsys, "--input", files["ex"], "--dump-slice", "C")
    assert code == 0
    lines = out.splitlines()
    assert lines[:3] == ["# branch alive weight 0.5", "1 001 0.5 0", "7 111 0.5 0"]
    assert "p_alive: 0.5" in lines


def test_observer_file(files, tmp_path, capsys):
    obs = tmp_path / "obs.json"
    obs.write_text(json.dumps({"dim": 3, "energies": [0, 1, 2], "beta": 0.1}))
    code, out, _ = run(capsys, "--input", files["ex"], "--observer", obs, "--format", "structured")
    assert code == 0 and json.loads(out)["p_alive"] == 0.5
    obs.write_text(json.dumps({"dim": 3, "energies": [0, 1], "beta": 0.1}))
    code, _, err = run(capsys, "--input", files["ex"], "--observer", obs)
    assert code == 1 and err.startswith("error:")


def test_structured_output_is_byte_stable(files):
    cmd = [sys.executable, "-m", "doomsday_sim", "--input", str(files["ex"]), "--mode", "montecarlo",
           "--trials", "500", "--seed", "3", "--format", "structured"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
    for value in json.loads(a).values():
        if isinstance(value, float):
            assert float(repr(value)) == value
