import json
import shlex
import subprocess
import sys

import pytest

from nambu.cli import COMMANDS, main


def call(*argv):
    out = []
    code = main(list(argv), out=out.append)
    return code, "\n".join(out)


def call_json(*argv):
    code, text = call(*argv, "--json")
    return code, json.loads(text) if text else None


def test_canonical_tensor_exit_zero():
    assert call("check-np", "--dim", "3", "--tensor", "1*d1^d2^d3")[0] == 0


def test_split_tensor_exit_one_with_witness():
    code, rep = call_json("check-np", "--dim", "6", "--tensor", "1*d1^d2^d3 + 1*d4^d5^d6")
    assert code == 1
    assert rep["verdict"]["passed"] is False
    assert rep["witness"]["fs"] and rep["witness"]["gs"]
    assert any("*" in f for f in rep["witness"]["fs"])  # a degree-2 monomial


def test_normal_form_pair_exit_zero():
    assert call("check-nj", "--dim", "3", "--delta", "1*d1^d2^d3", "--gamma", "1*d1^d2")[0] == 0


def test_parse_error_exit_two(capsys):
    assert call("check-np", "--dim", "3", "--tensor", "x5*d1^d2^d3")[0] == 2
    assert "out of range" in capsys.readouterr().err


def test_missing_flag_exit_two():
    assert call("check-np", "--dim", "3")[0] == 2
    assert call("check-np", "--tensor", "d1^d2")[0] == 2


def test_unknown_command_exit_two():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_json_schema():
    code, rep = call_json("check-np", "--dim", "3", "--tensor", "d1^d2^d3")
    for key in ("command", "inputs", "verdict", "config", "elapsed_ms", "version"):
        assert key in rep
    assert rep["inputs"]["tensor"]["text"] == "d1^d2^d3"
    assert len(rep["inputs"]["tensor"]["sha256"]) == 16


def test_no_timing_reports_are_byte_identical():
    argv = ("check-np", "--dim", "6", "--tensor", "d1^d2^d3 + d4^d5^d6", "--json", "--no-timing")
    a, b = call(*argv), call(*argv)
    assert a == b
    assert json.loads(a[1])["elapsed_ms"] is None


def test_random_mode_records_seed():
    code, rep = call_json("check-np", "--dim", "6", "--tensor", "d1^d2^d3 + d4^d5^d6",
                          "--mode", "random", "--samples", "50", "--seed", "9")
    assert rep["seed"] == 9
    assert rep["verdict"]["exhaustive"] is False


def test_replay_command_reproduces_residual():
    code, rep = call_json("check-np", "--dim", "6", "--tensor", "d1^d2^d3 + d4^d5^d6")
    argv = shlex.split(rep["replay"])[1:]
    code2, rep2 = call_json(*argv)
    assert code2 == 1
    assert rep2["witness"]["residual"] != "0"


def test_nj_replay_matches_reported_residual():
    code, rep = call_json("check-nj", "--dim", "3", "--delta", "d1^d2^d3", "--gamma", "d2^d3 + x1*d1^d2")
    assert code == 1
    code2, rep2 = call_json(*shlex.split(rep["replay"])[1:])
    assert code2 == 1
    assert rep2["witness"]["residual"] == rep["witness"]["residual"]


@pytest.mark.parametrize(
    "argv, code, result",
    [
        (("contract", "--dim", "3", "--tensor", "d1^d2^d3", "--functions", "x2"), 0, "-d1^d3"),
        (("wedge", "--dim", "3", "--tensor", "d2", "--other", "d1"), 0, "-d1^d2"),
        (("schouten", "--dim", "4", "--tensor", "d1^d2", "--other", "x1*d3^d4"), 0, "-d2^d3^d4"),
        (("bracket", "--dim", "3", "--tensor", "d1^d2^d3", "--functions", "x1^2, x2, x3"), 0, "2*x1"),
        (("bracket", "--dim", "3", "--tensor", "d1^d2^d3", "--gamma", "d1^d2", "--functions", "x1, x2, x3"), 0, "x3 + 1"),
        (("filippov-contract", "--dim", "4", "--constants",
          "c[4;1,2,3]=1; c[3;1,2,4]=-1; c[2;1,3,4]=1; c[1;2,3,4]=-1", "--vector", "0,0,0,1"), 0,
         "c[3; 1,2] = -1\nc[2; 1,3] = 1\nc[1; 2,3] = -1"),
    ],
)
def test_computations(argv, code, result):
    got, rep = call_json(*argv)
    assert got == code
    assert rep["result"] == result


@pytest.mark.parametrize(
    "argv, code",
    [
        (("check-poisson", "--dim", "2", "--tensor", "d1^(x1*d2)"), 0),
        (("check-poisson", "--dim", "3", "--tensor", "x2*d1^d2 + d2^d3"), 1),
        (("check-decomposable", "--dim", "4", "--tensor", "d1^d2^d3 + d2^d3^d4"), 0),
        (("check-decomposable", "--dim", "6", "--tensor", "d1^d2^d3 + d4^d5^d6"), 1),
        (("check-involutive", "--dim", "2", "--fields", "d1; x1*d2"), 0),
        (("check-involutive", "--dim", "3", "--fields", "d1 + x2*d3; d2"), 1),
        (("check-ham", "--dim", "3", "--tensor", "d1^d2^d3", "--fs", "x1, x2", "--gs", "x2, x3"), 0),
        (("check-fi-direct", "--dim", "3", "--tensor", "d1^d2^d3", "--fs", "x1, x2", "--gs", "x1, x2, x3"), 0),
        (("theorem1-crosscheck", "--dim", "3", "--tensor", "d1^d2^d3"), 0),
        (("filippov-check", "--dim", "4", "--constants",
          "c[4;1,2,3]=1; c[3;1,2,4]=-1; c[2;1,3,4]=1; c[1;2,3,4]=-1"), 0),
        (("filippov-check", "--dim", "4", "--constants", "c[1;1,2,3]=1; c[4;1,2,4]=1"), 1),
        (("filippov-search", "--dim", "3", "--arity", "3"), 0),
    ],
)
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_every_command_is_exercised():
    exercised = {
        "contract", "wedge", "schouten", "bracket", "check-poisson", "check-np", "check-nj",
        "check-decomposable", "check-involutive", "check-ham", "check-fi-direct", "theorem1-crosscheck",
        "filippov-check", "filippov-contract", "filippov-search",
    }
    assert exercised == set(COMMANDS)


def test_search_report_is_deterministic():
    argv = ("filippov-search", "--dim", "4", "--arity", "3", "--coeffs", "0,1",
            "--start", "0", "--stop", "2000", "--json", "--no-timing")
    a, b = call(*argv), call(*argv)
    assert a == b
    rep = json.loads(a[1])
    assert rep["result"]["examined"] == 2000


def test_search_overflow_is_usage_error():
    assert call("filippov-search", "--dim", "4", "--arity", "3", "--bound", "10")[0] == 2


def test_constants_from_file(tmp_path):
    f = tmp_path / "a4.txt"
    f.write_text("c[4; 1,2,3] = 1\nc[3; 1,2,4] = -1\nc[2; 1,3,4] = 1\nc[1; 2,3,4] = -1\n")
    assert call("filippov-check", "--dim", "4", "--constants", f"@{f}")[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nambu", "check-np", "--dim", "3", "--tensor", "d1^d2^d3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "verdict: PASS" in proc.stdout
