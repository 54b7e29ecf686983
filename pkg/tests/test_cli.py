import subprocess
import sys

import pytest

from chaincalc.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out.splitlines(), err


def test_decide_on_omega_is_false(capsys):
    code, out, _ = call(capsys, "decide", "-m", "1", "-e", "(w:1)^w", "-f", "ex x. all y. (y<x | y=x)")
    assert (code, out) == (1, ["false"])


def test_decide_on_words(capsys):
    assert call(capsys, "decide", "-m", "1", "-w", "01", "-f", "ex x. x in A0")[:2] == (0, ["true"])
    code, out, _ = call(capsys, "decide", "-q", "--engine", "theory", "-m", "1", "-w", "00",
                        "-f", "ex x. x in A0")
    assert (code, out) == (1, [])


def test_decide_without_formula_is_a_usage_error(capsys):
    code, _, err = call(capsys, "decide", "-q", "-m", "1", "-e", "w:1")
    assert code == 2 and "formula" in err


def test_theory_digests_agree(capsys):
    _, a, _ = call(capsys, "theory", "-n", "0", "-m", "1", "-e", "w:1 + w:1")
    _, b, _ = call(capsys, "theory", "-n", "0", "-m", "1", "-e", "w:11")
    assert a == b and a[0].startswith("digest ")
    _, c, _ = call(capsys, "theory", "-m", "0", "-e", "w:...", "--pretty")
    assert c[-1] == "{{eq,lt},{eq,lt,gt},{eq,gt}}"


def test_oracle(capsys):
    assert call(capsys, "oracle", "-m", "1", "-w", "01", "-f", "ex x. x in A0")[:2] == (0, ["true"])
    assert call(capsys, "oracle", "-m", "0", "-w", "..", "-f", "ex x. x < x")[:2] == (1, ["false"])


def test_reachable(capsys):
    code, out, _ = call(capsys, "reachable", "-n", "0", "-m", "0", "-L", "4", "--omega")
    assert code == 0 and out[0] == "count 5" and len(out) == 6
    assert out[-1].split()[1] == "omega"


def test_interp_commands(capsys):
    assert call(capsys, "interp", "check", "@membership", "-w", "010")[:2] == (0, ["true"])
    code, out, _ = call(capsys, "interp", "image", "@membership", "-w", "01")
    assert code == 0 and out[0] == "classes 4"
    assert "relation code (1,1) (1,3) (2,2) (2,3)" in out
    assert call(capsys, "interp", "bouquet", "@membership", "-w", "010", "--segment", "0:2")[1] == ["4"]
    code, out, _ = call(capsys, "interp", "check", "@membership_w", "-w", "0000", "--param", "W1=0,2")
    assert code == 0


def test_interp_file_and_failures(capsys, tmp_path):
    path = tmp_path / "loose.interp"
    path.write_text("dim 1\nU := true\nE := true\nP := sing(X1) & X1 sub Y1\n")
    code, out, _ = call(capsys, "interp", "check", str(path), "-w", "01")
    assert code == 1 and out[0].startswith("false")
    code, _, err = call(capsys, "interp", "image", str(path), "-w", "01")
    assert code == 2 and "not respected" in err
    code, _, err = call(capsys, "interp", "check", str(tmp_path / "missing.interp"), "-w", "0")
    assert code == 2


def test_shuffle(capsys):
    code, out, _ = call(capsys, "shuffle", "-m", "1", "-n", "1", "-w", "0110",
                        "--x", "0,3", "--y", "1,2", "--cuts", "2", "--index", "0")
    assert code == 0 and out[0] == "set {0,2}" and out[-1] == "true"


def test_seq(capsys):
    assert call(capsys, "seq", "check", "--seq", "prefix=[];period=[w:...]")[:2] == (0, ["true"])
    assert call(capsys, "seq", "check", "--seq", "prefix=[];period=[w:.]")[:2] == (1, ["false 0 2"])
    _, census, _ = call(capsys, "reachable", "-m", "0", "-L", "3")
    three = census[4].split()[0][:10]
    assert call(capsys, "seq", "check", "-L", "3", "--seq", f"prefix=[];period=[{three}]")[0] == 0
    code, out, _ = call(capsys, "seq", "shuffle", "--seq", "prefix=[];period=[w:.]",
                        "--t", "prefix=[];period=[w:..]", "--index", "prefix=[];period=[1,0]")
    assert code == 0 and out[0].startswith("prefix=[];period=[")
    assert call(capsys, "seq", "check", "--seq", "period=[w:.]")[0] == 2
    assert call(capsys, "seq", "check", "--seq", "prefix=[ffff];period=[]")[0] == 2


def test_guards_and_errors(capsys):
    code, _, err = call(capsys, "--max-level", "1", "theory", "-n", "2", "-e", "w:..")
    assert code == 2 and "level guard" in err
    code, _, err = call(capsys, "--max-work", "1000", "theory", "-n", "2", "-e", "(w:.)^w")
    assert code == 2 and "budget" in err
    assert call(capsys, "theory", "-m", "1", "-e", "w:2")[0] == 2
    assert call(capsys, "oracle", "-m", "1", "-w", "01", "-f", "ex x. (")[0] == 2


def test_environment_guard(capsys, monkeypatch):
    from chaincalc import errors
    monkeypatch.setenv("CHAINCALC_MAX_ORACLE_LEN", "2")
    monkeypatch.setattr(errors._local, "guards", None, raising=False)
    code, _, err = call(capsys, "oracle", "-w", "...", "-f", "ex2 X. true")
    assert code == 2 and "guard" in err


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "chaincalc.cli", "decide", "-q", "-m", "1",
                           "-e", "(w:1)^w", "-f", "ex x. all y. (x<y | x=y)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""


@pytest.mark.parametrize("argv", [["--help"], ["decide", "--help"], ["interp", "--help"]])
def test_help(capsys, argv):
    assert run(argv) == 0
    assert "usage" in capsys.readouterr().out
