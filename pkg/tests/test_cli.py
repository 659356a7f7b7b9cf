import json

import pytest

from ptsem.bases import parse_base
from ptsem.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, "--json", *argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "b.txt").write_text("atoms: p, q, r\n([p] => q) => r\n")
    (tmp_path / "u.txt").write_text(
        "atoms: a, b\nrules:\n  0: => a\n  1: ([a] => b) => b\n  2: => b\nbases: all-subsets\n")
    (tmp_path / "prog.txt").write_text("a1 -> a\na2 -> a\na2\n")
    return tmp_path


def test_prove(capsys):
    assert run(capsys, "prove", "--sequent", "a |- a")[0] == 0
    assert run(capsys, "prove", "--sequent", "|- ((a->b)->a)->a")[0] == 1


def test_derive(capsys, files):
    assert run(capsys, "derive", "--base", str(files / "b.txt"), "--context", "p", "--atom", "q")[0] == 1
    code, rep = run_json(capsys, "derive", "--base", str(files / "b.txt"), "--context", "q", "--atom", "q")
    assert code == 0 and rep["result"]["derivable"] is True


def test_equiv_check(capsys, files):
    code, rep = run_json(capsys, "equiv-check", "--universe", str(files / "u.txt"), "--max-depth", "3")
    assert code == 0 and rep["counterexamples"] == []
    assert set(rep) == {"command", "result", "counterexamples", "timing"}


def test_support_and_valid(capsys, files):
    u = str(files / "u.txt")
    assert run(capsys, "support", "--universe", u, "--at", "{0}", "--formula", "a")[0] == 0
    assert run(capsys, "support", "--universe", u, "--at", "{}", "--formula", "a")[0] == 1
    assert run(capsys, "valid", "--universe", u, "--sequent", "a |- a | b")[0] == 0
    assert run(capsys, "valid", "--universe", u, "--sequent", "|- a")[0] == 1


def test_prove_via_base_witness(capsys):
    code, rep = run_json(capsys, "prove-via-base", "--sequent", "a |- a|a")
    assert code == 0
    assert rep["result"]["provable"] is True and rep["result"]["witness"]["checked"] is True


def test_flatten_output_is_a_base_file(capsys):
    code, out = run(capsys, "flatten", "--sequent", "a |- a | a")
    assert code == 0 and "# #0 = a | a" in out
    assert len(parse_base(out).rules) == 3


def test_dagger(capsys):
    assert run(capsys, "dagger-check", "--sequent", "a |- a|a", "--extra", "=> a")[0] == 0
    assert run(capsys, "dagger-check", "--sequent", "a->b |- a->b", "--literal")[0] == 1
    assert run(capsys, "dagger-check", "--sequent", "a |- a", "--extra", "=> zz")[0] == 2


def test_cps(capsys):
    code, out = run(capsys, "cps", "run", "((\\g. g) (\\x. x)) ((\\y. y) C)", "--trace")
    assert code == 0 and "{{" in out and "value: C" in out.strip().splitlines()[-1]
    assert run(capsys, "cps", "eval", "(\\x. x x) (\\x. x x)", "--steps", "50")[0] == 1
    code, rep = run_json(capsys, "cps", "type", "f e", "--env", "f: a -> b, e: a")
    assert code == 0 and rep["result"]["type"] == "b"
    assert run(capsys, "cps", "type", "(\\x:a. x) C", "--env", "C: b")[0] == 1


def test_search(capsys, files):
    code, out = run(capsys, "search", "--program", str(files / "prog.txt"), "--goal", "a", "--trace")
    assert code == 0 and "swap" in out.lower()
    assert run(capsys, "search", "--program", str(files / "prog.txt"), "--goal", "b")[0] == 1


@pytest.mark.parametrize("argv", [
    ["prove", "--sequent", "a |-"],
    ["derive", "--base", "/nonexistent/file", "--atom", "a"],
    ["cps", "eval", "(\\x"],
    ["frobnicate"],
    ["prove"],
])
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == 2
    capsys.readouterr()
