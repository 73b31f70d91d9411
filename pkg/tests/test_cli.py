import json

import pytest

from ltlfrag.cli import EXIT_ERROR, EXIT_SAT, EXIT_UNSAT, main
from ltlfrag.kripke import Kripke

CHAIN = Kripke(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "c")],
               {"a": ["y"], "b": ["y"], "c": ["x"]}, "a")


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    write("k.json", CHAIN.dumps())
    return write


def test_classify(files, capsys):
    assert main(["classify", files("f.ltl", "G (x | y)")]) == 0
    assert capsys.readouterr().out.strip() == "NL-complete (13), clone V"
    assert main(["classify", files("g.ltl", "x U y")]) == 0
    assert capsys.readouterr().out.strip() == "NP-hard (7), clone I"
    assert main(["classify", files("h.ltl", "G (x ^ y)")]) == 0
    assert capsys.readouterr().out.strip() == "Open, clone L"


def test_classify_with_declarations(files, capsys):
    decl = files("m.decl", "maj/3 = 00010111\n")
    assert main(["classify", files("f.ltl", "F maj(x, y, X z)"), "--decls", decl]) == 0
    assert "clone M" in capsys.readouterr().out


def test_check_sat_and_unsat(files, tmp_path, capsys):
    k = str(tmp_path / "k.json")
    assert main(["check", files("f.ltl", "F x"), k, "--witness"]) == EXIT_SAT
    out = capsys.readouterr().out
    assert out.startswith("Sat  engine=fx_v") and "c" in out.splitlines()[1]
    assert main(["check", files("g.ltl", "G y"), k]) == EXIT_UNSAT
    assert capsys.readouterr().out.startswith("Unsat  engine=gx_e")


def test_check_json(files, tmp_path, capsys):
    k = str(tmp_path / "k.json")
    assert main(["check", files("f.ltl", "y U x"), k, "--json"]) == EXIT_SAT
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "sat"
    assert report["classification"]["text"] == "NP-hard (7)"
    assert report["witness"]["prefix"][0] == "a"


def test_check_engines(files, tmp_path, capsys):
    k = str(tmp_path / "k.json")
    f = files("f.ltl", "x U y")
    assert main(["check", f, k, "--engine", "fast"]) == EXIT_ERROR
    assert main(["check", f, k, "--engine", "oracle"]) == EXIT_ERROR
    assert main(["check", files("g.ltl", "G x"), k, "--engine", "oracle",
                 "--max-prefix", "2", "--max-cycle", "1", "--json"]) == EXIT_UNSAT
    report = json.loads(capsys.readouterr().out)
    assert (report["verdict"], report["bound"], report["engine"]) == ("unsat-up-to", 3, "oracle")
    assert main(["check", f, k, "--max-cycle", "0"]) == EXIT_ERROR


def test_check_errors(files, tmp_path, capsys):
    k = str(tmp_path / "k.json")
    assert main(["check", files("bad.ltl", "F (x"), k]) == EXIT_ERROR
    assert main(["check", files("f.ltl", "F x"), str(tmp_path / "missing.json")]) == EXIT_ERROR
    assert main(["check", files("f.ltl", "F x"), files("broken.json", "{")]) == EXIT_ERROR
    assert capsys.readouterr().err.count("error:") == 3


def test_gadget_round_trip(files, tmp_path, capsys):
    cnf = files("u.cnf", "p cnf 1 2\n1 0\n-1 0\n")
    out = tmp_path / "out" / "inst"
    assert main(["gadget", "u", cnf, str(out)]) == 0
    assert capsys.readouterr().out.startswith("u: ")
    assert main(["check", f"{out}.ltl", f"{out}.json", "--engine", "oracle",
                 "--max-prefix", "9", "--max-cycle", "7"]) == EXIT_UNSAT


def test_gadget_exp_and_gap(files, tmp_path, capsys):
    assert main(["gadget", "exp", "2", str(tmp_path / "e")]) == 0
    assert "exp: 7 states" in capsys.readouterr().out
    gap = files("g.txt", "u w\nu v\nv w\n")
    assert main(["gadget", "gap-f", gap, str(tmp_path / "g")]) == 0
    assert main(["check", str(tmp_path / "g.ltl"), str(tmp_path / "g.json"), "--engine", "fast"]) == EXIT_SAT
    assert main(["gadget", "exp", "zero", str(tmp_path / "z")]) == EXIT_ERROR

