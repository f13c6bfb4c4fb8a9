import csv
import json
import subprocess
import sys

import pytest

from abreu_kit import from_json, potential_from_dict, preset
from abreu_kit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_extremal_interval(capsys):
    code, out, _ = run(capsys, "extremal", "--polytope", "interval")
    assert code == 0
    data = json.loads(out)
    assert data["s"] == {"a0": 1.0, "a": [0.0]} and data["rbar"] == 1.0


def test_eval_interval(capsys):
    code, out, _ = run(capsys, "eval", "--polytope", "interval", "--potential", "guillemin", "--level", "5")
    assert code == 0
    assert abs(json.loads(out)["F"] - (-0.613706)) < 1e-5


def test_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "--polytope", "square", "--level", "2", "--format", "csv")
    rows = list(csv.reader(out.splitlines()))
    assert code == 0 and rows[0][:2] == ["F", "entropy"] and len(rows) == 2


def test_check_non_delzant(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"dim": 2, "facets": [
        {"normal": [-1, 0], "support": 0}, {"normal": [0, -1], "support": 0}, {"normal": [1, 2], "support": 2}]}))
    code, _, err = run(capsys, "check", "--polytope", str(f))
    assert code == 1 and "NonDelzantVertex" in err


def test_parse_error_reports_position(tmp_path, capsys):
    f = tmp_path / "broken.json"
    f.write_text('{"dim": 1,\n "facets": [}\n')
    code, _, err = run(capsys, "check", "--polytope", str(f))
    assert code == 2 and "line 2" in err and "column" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--polytope", "no-such-preset")[0] == 2


def test_domain_error_exit_code(tmp_path, capsys):
    f = tmp_path / "u.json"
    f.write_text(json.dumps({"kind": "parametrized", "coeffs": {"guillemin_weight": 1.0, "terms": [
        {"exponent": [2], "coeff": -5.0}]}}))
    code, _, err = run(capsys, "eval", "--polytope", "interval", "--potential", str(f))
    assert code == 1 and "NonConvexAtNode" in err


def test_polytope_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "check", "--polytope", "hirzebruch-1")
    assert code == 0
    f = tmp_path / "p.json"
    f.write_text(json.dumps(json.loads(out)["polytope"]))
    assert from_json(f.read_text()) == preset("hirzebruch-1")
    code, out2, _ = run(capsys, "check", "--polytope", str(f))
    assert code == 0 and json.loads(out2)["polytope"] == json.loads(out)["polytope"]


def test_minimize_outputs_and_manifest(tmp_path, capsys):
    trace, coeffs = tmp_path / "trace.csv", tmp_path / "coeffs.json"
    args = ["minimize", "--polytope", "interval", "--degree", "4", "--level", "3",
            "--out", str(trace), "--coeffs", str(coeffs)]
    code, out, _ = run(capsys, *args)
    assert code == 0 and json.loads(out)["converged"]
    assert trace.read_text().startswith("iteration,F,grad_norm,step,boundary_integral,interior_integral\n")
    u = potential_from_dict(json.loads(coeffs.read_text()), preset("interval"))
    assert u.dim == 1
    rows = list(csv.reader((tmp_path / "manifest.csv").read_text().splitlines()))
    assert rows[0] == ["command", "input", "config", "version", "wall_time", "output"]
    assert {r[5] for r in rows[1:]} == {"trace.csv", "coeffs.json"}
    # the written potential is readable back by the tool
    code, out, _ = run(capsys, "eval", "--polytope", "interval", "--potential", str(coeffs), "--level", "3")
    assert code == 0


def test_determinism(tmp_path, capsys):
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        d.mkdir()
        for cmd in (["scan-pl", "--polytope", "square", "--angles", "8", "--offsets", "5"],
                    ["residual", "--polytope", "cp2-simplex", "--level", "2", "--points", "20"],
                    ["minimize", "--polytope", "interval", "--degree", "4"]):
            assert run(capsys, *cmd, "--out", str(d / f"{cmd[0]}.csv"))[0] == 0
        outs.append([(d / f"{c}.csv").read_bytes() for c in ("scan-pl", "residual", "minimize")])
    assert outs[0] == outs[1]


def test_margins_and_scan(capsys):
    code, out, _ = run(capsys, "check-46", "--polytope", "cp2-simplex")
    assert code == 0 and json.loads(out) == {"margins": [3.0, 3.0, 3.0], "pass": True}
    code, out, _ = run(capsys, "scan-pl", "--polytope", "interval", "--offsets", "19")
    assert code == 0 and abs(json.loads(out)["min_L"] - 0.095) < 1e-12


def test_probe_and_quadrature_report(capsys):
    code, out, _ = run(capsys, "probe", "--polytope", "interval", "--scales", "1,2,3", "--level", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "integral_u,F" and len(lines) == 4
    code, out, _ = run(capsys, "quadrature-report", "--polytope", "interval", "--max-level", "3")
    assert code == 0 and out.startswith("level,integral,value,delta\n")


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "abreu_kit.cli", "check-46", "--polytope", "square"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["pass"]
