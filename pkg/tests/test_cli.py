import json
import subprocess
import sys

import pytest

from pbwdeform.cli import bundled_path, main, render, run


def report(*argv):
    code, rep, _ = run(list(argv))
    return code, rep


def test_check_pbw_verdicts():
    code, rep = report("check-pbw", "bundled:weyl")
    assert code == 0 and rep["verdict"] == "pass"
    code, rep = report("check-pbw", "bundled:jacobi_bad")
    assert code == 1 and rep["verdict"] == "fail"
    failure = rep["result"]["failures"][0]
    assert failure["condition"] == "pbwfi2(j=1)"
    assert failure["residual"] == "-x"
    assert failure["witness"]


def test_tor3_reports_the_witness_weight():
    code, rep = report("tor3", "bundled:xyx")
    assert code == 1
    assert rep["result"]["verdict"] == "not concentrated"
    assert rep["result"]["witnessWeight"] == 5
    code, rep = report("tor3", "bundled:truncated_cubic")
    assert code == 0 and rep["result"]["dims"] == {"4": 1}


def test_synthesize_weyl_table():
    code, rep = report("synthesize", "bundled:weyl", "--level-cap", "4", "--weight-cap", "6")
    assert code == 0
    rows = rep["result"]["psi"]
    assert {"level": 2, "left": "x", "right": "y", "value": "1"} in rows
    assert all(row["level"] % 2 == 0 for row in rows)
    assert rep["caps"] == {"degree": 6, "level": 4, "weight": 6}


def test_rationals_are_strings():
    code, rep = report("gr-dims", "bundled:weyl")
    assert code == 0 and rep["result"]["grDims"] == [1, 2, 3, 4, 5, 6, 7]
    code, rep = report("synthesize", "bundled:cubic_deformed", "--weight-cap", "4")
    values = [row["value"] for row in rep["result"]["psi"]]
    assert "3*x^2" in values


@pytest.mark.parametrize("command", ["verify-assoc", "extract-phi", "rees-dims"])
def test_pipeline_commands_pass_on_bundled_examples(command):
    for name in ("weyl", "cubic_deformed"):
        code, rep = report(command, f"bundled:{name}", "--degree-cap", "5", "--weight-cap", "5")
        assert code == 0, (name, rep)


def test_verify_theorems_command():
    code, rep = report("verify-theorems", "bundled:derivation", "--degree-cap", "4",
                       "--level-cap", "3")
    assert code == 0 and rep["result"]["passed"]


def test_precondition_failures_exit_one():
    code, rep = report("synthesize", "bundled:jacobi_bad")
    assert code == 1 and rep["error"]["kind"] == "PreconditionError"
    code, rep = report("synthesize", "bundled:xyx", "--level-cap", "2")
    assert code == 1
    code, rep = report("synthesize", "bundled:xyx", "--level-cap", "2", "--waive-tor3")
    assert code == 0 and rep["result"]["tor3Waived"] is True


def test_hh_dims_command():
    code, rep = report("hh-dims", "bundled:commutator", "--hh-degree", "2", "--hh-weight", "-1",
                       "--weight-cap", "5")
    assert code == 0
    assert rep["result"]["dims"] == [{"degree": 2, "weight": -1, "dim": 2}]


def test_usage_and_parse_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("generators x,y; N=2; rel r = x*y - y;")
    code, rep = report("check-pbw", str(bad))
    assert code == 2 and rep["error"]["kind"] == "ParseError" and rep["error"]["line"] == 1
    code, rep = report("check-pbw", str(tmp_path / "missing.alg"))
    assert code == 2 and rep["error"]["kind"] == "IOError"
    code, rep = report("no-such-command", "bundled:weyl")
    assert code == 2 and rep is None
    code, rep = report("check-pbw", "bundled:weyl", "--degree-cap", "-1")
    assert code == 2


def test_capacity_errors_exit_three():
    code, rep = report("tor3", "bundled:weyl", "--weight-cap", "9")
    assert code == 3 and rep["error"]["kind"] == "CapacityError"


def test_timing_is_null_unless_requested():
    _, rep = report("check-pbw", "bundled:weyl")
    assert rep["timing"] is None
    _, rep = report("check-pbw", "bundled:weyl", "--timing")
    assert isinstance(rep["timing"], float)


def test_report_header():
    _, rep = report("check-pbw", "bundled:weyl", "--seedless")
    assert rep["schemaVersion"] == 1
    assert rep["command"] == "check-pbw"
    assert rep["seedless"] is True
    assert rep["version"]


def test_json_out_writes_the_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["tor3", "bundled:truncated_cubic", "--json-out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["verdict"] == "pass"


def test_reports_are_byte_identical_across_processes():
    argv = [sys.executable, "-m", "pbwdeform", "synthesize", bundled_path("sl2"),
            "--level-cap", "3", "--weight-cap", "4", "--seedless"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["verdict"] == "pass"


def test_render_sorts_keys():
    text = render({"b": 1, "a": {"d": 2, "c": 3}})
    assert text.index('"a"') < text.index('"b"') and text.index('"c"') < text.index('"d"')
