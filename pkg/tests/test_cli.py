"""Command-line frontend: subcommands, exit codes, deterministic reports."""

import json

import pytest

from homchains.cli import main
from homchains.posets import format_poset_text
from homchains import product_of_chains


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_spec_table(capsys):
    code, out, _ = run(capsys, "build", "--spec", "1,1,1")
    assert code == 0
    assert "f-vector: (6, 6)" in out


def test_build_spec_json(capsys):
    code, out, _ = run(capsys, "build", "--spec", "1,1,1,1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["f_vector"] == [24, 36, 6]
    assert payload["euler"] == -6


def test_build_single_chain(capsys):
    code, out, _ = run(capsys, "build", "--spec", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["f_vector"] == [1]


def test_build_poset_file(tmp_path, capsys):
    path = tmp_path / "grid.poset"
    path.write_text(format_poset_text(product_of_chains((2, 2))))
    code, out, _ = run(capsys, "build", "--poset", str(path), "--format", "json")
    assert code == 0
    assert json.loads(out)["f_vector"] == [6, 6, 1]


def test_match_trace(capsys):
    code, out, _ = run(capsys, "match", "--spec", "2,2,2,2",
                       "--emit-trace", "(21)1(32)344", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    steps = payload["trace"]["steps"]
    assert steps[0] == {"r": 4, "s": 2, "j": 8, "rho": "b"}
    assert steps[-1] == {"r": 3, "s": 1, "j": 4, "rho": "a"}
    assert payload["trace"]["partner"] == "(21)132344"


def test_match_emit_critical(capsys):
    code, out, _ = run(capsys, "match", "--spec", "1,1,1", "--emit-critical",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["critical_cells"] == {"0": ["123"], "1": ["3(21)"]}


def test_match_emit_pairs(capsys):
    code, out, _ = run(capsys, "match", "--spec", "1,1,1", "--emit-pairs",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["pairs"]) == 5
    assert ["132", "1(32)"] in payload["pairs"]


def test_verify_all_passes(capsys):
    code, out, _ = run(capsys, "verify", "--spec", "1,1,2", "--suite", "all")
    assert code == 0
    assert "FAIL" not in out


def test_verify_euler_suite(capsys):
    code, out, _ = run(capsys, "verify", "--spec", "1,1,1,1", "--suite", "euler")
    assert code == 0
    assert "chi = -6" in out


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "--spec", "1,1", "--suite", "nope")
    assert code == 2
    assert "unknown suite" in err


def test_malformed_spec_usage_error(capsys):
    code, _, err = run(capsys, "build", "--spec", "2,1")
    assert code == 2
    assert "error" in err


def test_missing_input_usage_error(capsys):
    code, _, err = run(capsys, "build")
    assert code == 2


def test_report_deterministic(capsys):
    code1, out1, _ = run(capsys, "report", "--spec", "1,1,2")
    code2, out2, _ = run(capsys, "report", "--spec", "1,1,2")
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["schema"] == "homchains-report/1"
    assert payload["betti"] == [1, 2, 0]
    assert payload["f_vector"] == [12, 15, 2]
    assert payload["critical"]["1"] == ["3(21)1", "3(21)2"] or len(payload["critical"]["1"]) == 2
    assert "digest" in payload["matching"]


def test_report_threads_deterministic(capsys):
    _, out1, _ = run(capsys, "report", "--spec", "2,2")
    _, out4, _ = run(capsys, "report", "--spec", "2,2", "--threads", "4")
    assert out1 == out4


def test_euler_command(capsys):
    code, out, _ = run(capsys, "euler", "--n-max", "8", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["chi"]["4"] == -6
    assert payload["chi"]["8"] == 2520


def test_cap_exceeded_exit_code(capsys):
    code, _, err = run(capsys, "build", "--spec", "1,1,1,1,1,1", "--max-cells", "10")
    assert code == 2
