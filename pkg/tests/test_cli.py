import json
import subprocess
import sys

import pytest

from symsmt import dimacs
from symsmt.cli import main, parse_duration
from symsmt.parser import parse_file

from _util import TABLE1, cyclic
from symsmt.printer import serialize


@pytest.fixture
def unsat_file(tmp_path):
    p = tmp_path / "unsat.smt2"
    p.write_text("(declare-const x Int)(assert (> x 8))")
    return p


def test_solve_table1(capsys, tmp_path):
    out_json = tmp_path / "r.json"
    assert main(["solve", str(TABLE1), "--mode", "sym", "--bound", "16", "--json", str(out_json)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "sat"
    r = json.loads(out_json.read_text())
    assert r["schema"] == 1 and r["status"] == "sat"
    assert r["stats"]["symmetries_accepted"] == 1
    assert r["config_echo"]["bound"] == 16


def test_solve_json_to_stderr(capsys, unsat_file):
    assert main(["solve", str(unsat_file), "--mode", "plain", "--bound", "8"]) == 0
    cap = capsys.readouterr()
    assert cap.out.strip() == "unsat"
    assert json.loads(cap.err)["status"] == "unsat(bounded)"


def test_solve_unknown_exit_2(capsys):
    assert main(["solve", str(TABLE1), "--timeout", "0"]) == 2
    assert capsys.readouterr().out.startswith("unknown")


def test_solve_dimacs(tmp_path, capsys):
    path = tmp_path / "s.cnf"
    assert main(["solve", str(TABLE1), "--dimacs", str(path)]) == 0
    n, clauses = dimacs.loads(path.read_text())
    assert n == 5 and [-2, 3] in clauses


@pytest.mark.parametrize("argv", [
    [],
    ["solve"],
    ["solve", "x.smt2", "--mode", "fast"],
    ["solve", "x.smt2", "--timeout", "soon"],
    ["frobnicate"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_parse_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.smt2"
    bad.write_text("(assert (> x 1)")
    assert main(["solve", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "1:1" in err
    bad.write_text("(declare-const x Int)(assert (> (div x 2) 1))")
    assert main(["oracle", str(bad)]) == 1


def test_syms(capsys, tmp_path):
    j = tmp_path / "s.json"
    assert main(["syms", str(TABLE1), "--json", str(j)]) == 0
    assert capsys.readouterr().out.strip() == "(Q R)(x y)"
    info = json.loads(j.read_text())
    assert info["accepted"] == 1 and info["permutations"] == ["(Q R)(x y)"]


def test_oracle(capsys, unsat_file):
    assert main(["oracle", str(TABLE1), "--bound", "3"]) == 0
    assert capsys.readouterr().out.split("\n")[:2] == ["sat", "models 343"]
    assert main(["oracle", str(unsat_file), "--bound", "8"]) == 0
    assert capsys.readouterr().out.startswith("unsat")


def test_preprocess(tmp_path, capsys):
    cnf, smt = tmp_path / "p.cnf", tmp_path / "p.smt2"
    assert main(["preprocess", str(TABLE1), "--dimacs", str(cnf), "--smt2", str(smt)]) == 0
    text = cnf.read_text()
    assert "c var 1 P (< 2 z)" in text and "-2 3 0" in text
    aug = parse_file(smt)
    assert len(aug.assertion.args) == 4
    assert "(<= x y)" in smt.read_text()


def test_gen_and_bench(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    assert main(["gen", "--profile", "mixed", "--count", "6", "--seed", "3", "--out", str(corpus)]) == 0
    assert len(list(corpus.glob("*.smt2"))) == 6
    j, c = tmp_path / "b.json", tmp_path / "b.csv"
    assert main(["bench", str(corpus), "--modes", "plain,sym,hybrid", "--timeout", "5s",
                 "--json", str(j), "--csv", str(c)]) == 0
    report = json.loads(j.read_text())
    assert report["summary"]["instances"] == 6
    assert report["summary"]["solved"] == {"plain": 6, "sym": 6, "hybrid": 6}
    assert report["summary"]["non_overlap"]["hybrid"] == {"plain": 0, "sym": 0}
    assert len(c.read_text().splitlines()) == 1 + 18


def test_bench_empty_dir(tmp_path, capsys):
    assert main(["bench", str(tmp_path)]) == 1


def test_durations():
    assert parse_duration("5s") == 5.0
    assert parse_duration("250ms") == 0.25
    assert parse_duration("2m") == 120.0
    assert parse_duration("1.5") == 1.5


def test_console_entry_point(tmp_path):
    path = tmp_path / "c.smt2"
    path.write_text(serialize(cyclic()))
    proc = subprocess.run([sys.executable, "-m", "symsmt", "solve", str(path), "--bound", "4"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "sat"
