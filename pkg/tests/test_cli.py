import io
import json
import subprocess
import sys
from fractions import Fraction as F

import jsonschema
import pytest

from vnfree import engine
from vnfree.cli import cmd_eval, cmd_fdim, cmd_groups, cmd_repl, cmd_verify, main
from vnfree.dsl import JSON_SCHEMA
from vnfree.verify import VerifyConfig


def run_eval(expr, **kw):
    out, err = io.StringIO(), io.StringIO()
    code = cmd_eval(expr, out=out, err=err, **kw)
    return code, out.getvalue(), err.getvalue()


def test_eval_golden():
    code, out, _ = run_eval("3/5:C + 2/5:C * (1/2:C + 1/2:C)")
    assert code == 0
    assert out == "(1/10)C (+) (4/5)[LZxM2] (+) (1/10)C\n"


def test_eval_group_fdim():
    assert run_eval("fdim(LG(S3))")[:2] == (0, "5/6\n")


def test_exit_codes():
    code, out, err = run_eval("compress(M2, 1/2)")
    assert code == 2 and out == "" and "TypeMismatch" in err
    code, out, err = run_eval("garbage((")
    assert code == 1 and "ParseError" in err
    assert run_eval("1/2:C + 1/3:C")[0] == 2


def test_eval_json():
    code, out, _ = run_eval("(4/5:C + 1/5:C) * M2", json_out=True)
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, JSON_SCHEMA)
    assert obj["summands"][0] == {"weight": "4/5", "kind": "fgf", "param": "9/8"}
    assert obj["summands"][1]["atom_source"] == [1, 0]
    assert obj["justification"] == ["Thm3.6"]


def test_eval_strict():
    expr = "(1/2:LF(2) + 1/4:M2 + 1/4:LZ) * (1/2:C + 1/2:C)"
    assert run_eval(expr)[0] == 0
    code, _, err = run_eval(expr, strict=True)
    assert code == 2 and "ExtrapolationRejected" in err


def test_fdim_command():
    out, err = io.StringIO(), io.StringIO()
    assert cmd_fdim("LF(2) * M2", out=out, err=err) == 0
    assert out.getvalue() == "11/4\n"
    assert cmd_fdim("fdim(M2)", out=out, err=err) == 2


def test_repl():
    inp = io.StringIO("LF(2) * LF(3)\ngarbage((\n\nfdim(M2)\n:quit\nLF(2)\n")
    out, err = io.StringIO(), io.StringIO()
    assert cmd_repl(inp=inp, out=out, err=err) == 0
    assert out.getvalue() == "LF(5)\n3/4\n"
    assert "ParseError" in err.getvalue()


def test_repl_eof():
    assert cmd_repl(inp=io.StringIO("M2\n"), out=io.StringIO(), err=io.StringIO()) == 0


def test_groups_table(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("D5 10 1,1,2,2\nZ inf\n", encoding="utf-8")
    out = io.StringIO()
    assert cmd_groups(str(path), out=out, err=io.StringIO()) == 0
    assert out.getvalue() == "name\torder\tirrep_dims\tfdim\nD5\t10\t1,1,2,2\t9/10\nZ\tinf\t-\t1\n"
    path.write_text("X 8 1,1,2\n", encoding="utf-8")
    err = io.StringIO()
    assert cmd_groups(str(path), out=io.StringIO(), err=err) == 2
    assert "TableValidationError" in err.getvalue()


def test_groups_builtin():
    out = io.StringIO()
    assert cmd_groups(out=out) == 0
    assert "S3\t6\t1,1,2\t5/6" in out.getvalue()


def test_eval_with_table(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("D5 10 1,1,2,2\n", encoding="utf-8")
    out = io.StringIO()
    assert cmd_eval("LG(D5) * LG(Z2)", table=str(path), out=out, err=io.StringIO()) == 0
    assert out.getvalue() == "LF(7/5)\n"


def test_verify_passes():
    out = io.StringIO()
    assert cmd_verify(VerifyConfig(seed=1, cases=60), out=out) == 0
    assert out.getvalue().rstrip().endswith("PASS")


def test_verify_zero_cases():
    out = io.StringIO()
    assert cmd_verify(VerifyConfig(seed=1, cases=0), out=out) == 0
    assert "warning" in out.getvalue()


def test_verify_deterministic():
    outs = []
    for _ in range(2):
        out = io.StringIO()
        cmd_verify(VerifyConfig(seed=5, cases=40, strict=True), out=out)
        outs.append(out.getvalue())
    assert outs[0] == outs[1]


def test_verify_catches_broken_atom_formula(monkeypatch):
    def broken(alpha, n, beta, m):
        size = max(n, m)
        excess = alpha / (n * n) + beta / (m * m) - 1
        # wrong scale: drops the size^2 factor
        return (excess if excess > 0 else F(0)), size

    monkeypatch.setattr(engine, "atom_weight", broken)
    out = io.StringIO()
    assert cmd_verify(VerifyConfig(seed=1, cases=200), out=out) == 2
    report = out.getvalue()
    assert "counterexample:" in report and " * " in report
    assert report.rstrip().endswith("FAIL")


def test_main_dispatch(capsys):
    assert main(["eval", "LF(2)", "*", "LF(3)"]) == 0
    assert capsys.readouterr().out == "LF(5)\n"
    assert main(["fdim", "LG(S3)"]) == 0
    assert capsys.readouterr().out == "5/6\n"


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "vnfree", "eval", "--json", "LG(S3) * LG(S3)"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["summands"][0]["param"] == "5/3"
