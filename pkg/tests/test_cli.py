import csv
import io
import json
import subprocess
import sys

import pytest

from binteam.cli import CSV_COLUMNS, main
from binteam.quantum import half_cac_witness, save_strategy
from binteam.team_core import save_instance


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def witness_files(tmp_path):
    inst, strat = half_cac_witness()
    save_instance(inst, tmp_path / "inst.json")
    save_strategy(strat, tmp_path / "strat.json")
    return tmp_path / "inst.json", tmp_path / "strat.json"


def test_classify_csv():
    code, text = run("classify")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 256
    assert sum(r["verdict"] == "no-advantage:overlap-or-null-or-pigeonhole" for r in rows) == 124


def test_classify_other_formats():
    assert len(json.loads(run("classify", "--format", "json")[1])) == 256
    assert run("classify", "--format", "table")[1].count("\n") == 257


def test_orbit_of_zero_pair_is_singleton():
    code, text = run("orbit", "--code", "0")
    data = json.loads(text)
    assert code == 0 and data["size"] == 1 and data["members"][0]["path"] == []


def test_orbit_by_matrices():
    code, text = run("orbit", "--M", "[[-1,0],[0,0]]", "--N", "[[0,-1],[-1,0]]")
    data = json.loads(text)
    assert data["size"] == 8 and data["verdict"] == "advantage:halfCAC-orbit"


def test_solve_witness_instance(witness_files):
    inst, strat = witness_files
    code, text = run("solve", str(inst), "--strategy", str(strat), "--restarts", "4")
    data = json.loads(text)
    assert code == 0
    assert data["local_optimum"] == "-6/5" and data["ns_optimum"] == "-7/5"
    assert data["centralized_optimum"] == "-8/5"
    assert data["local_argmin"]["actions"] == {"A": ["u_A^0", "u_A^0"], "B": ["u_B^1", "u_B^1"]}
    assert abs(data["strategy"]["quantum_cost"] + 1.2196152) < 1e-7
    assert data["strategy"]["advantage"] and data["ns_gap"]
    assert data["seesaw"]["value"] < -1.2196


def test_solve_is_deterministic(witness_files):
    inst, _ = witness_files
    assert run("solve", str(inst), "--restarts", "3")[1] == run("solve", str(inst), "--restarts", "3")[1]


def test_witness_command(tmp_path):
    code, text = run("witness", "--strategy-out", str(tmp_path / "s.json"))
    data = json.loads(text)
    assert code == 0 and data["valid"] and data["local_optimum"] == "-6/5"
    assert data["closed_form_error"] < 1e-12
    assert json.loads((tmp_path / "s.json").read_text()) == data["strategy"]


def test_verify_and_report(tmp_path):
    out = tmp_path / "audit.json"
    code, text = run("verify", "--samples", "20", "--chi-grid", "1/2,3", "--output", str(out))
    assert code == 0 and "overall: PASS" in text
    assert json.loads(out.read_text())["metadata"]["chi_grid"] == ["1/2", "3"]
    code, text = run("report", str(out))
    assert code == 0 and "ns-equals-local" in text
    code, text = run("report")
    assert code == 0 and text.count("\n") == 257


def test_report_exit_one_on_failed_audit(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"metadata": {}, "checks": [{"name": "x", "passed": False}]}))
    assert run("report", str(path))[0] == 1


@pytest.mark.parametrize("argv", [
    ["solve", "/nonexistent.json"],
    ["orbit", "--code", "300"],
    ["orbit", "--M", "not json", "--N", "[[0,0],[0,0]]"],
    ["orbit"],
    ["verify", "--chi-grid", "0"],
    ["verify", "--samples", "0"],
])
def test_malformed_input_exit_two(argv, capsys):
    assert run(*argv)[0] == 2
    assert "error" in capsys.readouterr().err


def test_malformed_instance_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"M": [[0, 0], [0, 0]], "N": [[0, 0], [0, 0]], "prior": {"0,0,0": "1/2"}, "chi": 1}))
    assert run("solve", str(path))[0] == 2
    assert "sum to 1" in capsys.readouterr().err


def test_invalid_strategy_file(witness_files, tmp_path):
    inst, strat = witness_files
    data = json.loads(strat.read_text())
    data["projectors"]["A,0,0"] = [[[1, 0], [1, 0]], [[0, 0], [0, 0]]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run("solve", str(inst), "--strategy", str(bad), "--no-seesaw")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "binteam.cli", "orbit", "--code", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["size"] == 1
