import json

import pytest

from wronskit.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, (json.loads(out.out) if out.out.strip() else None), out.err


def test_degree(capsys):
    rc, doc, _ = run(capsys, "degree", "--n", "1", "--d", "4")
    assert rc == 0 and doc["degree"] == 5 and doc["real_degree"] == doc["white_formula"] == 1


def test_solve_wronski_with_negative_roots(capsys):
    rc, doc, _ = run(capsys, "solve-wronski", "--n", "1", "--d", "3", "--roots", "-1,0,1,0.31")
    assert rc == 0 and doc["found"] == doc["expected"] == 2 and doc["complete"]


def test_solve_wronski_from_problem(capsys):
    rc, doc, _ = run(capsys, "solve-wronski", "--problem", "G(1,3): i@-1 i@0 i@1 i@2")
    assert rc == 0 and doc["found"] == 2


def test_bad_input_exits_with_message(capsys):
    rc, _, err = run(capsys, "solve-wronski", "--problem", "G(1,3): bogus")
    assert rc == 3 and err.startswith("error:")
    rc, _, err = run(capsys, "solve-wronski", "--n", "1", "--d", "3")
    assert rc == 3


def test_fourlines(capsys, tmp_path):
    csv = tmp_path / "lines.csv"
    rc, doc, _ = run(capsys, "fourlines", "--s4", "0.31", "--csv", str(csv))
    assert rc == 0 and doc["real"] == [True, True]
    assert doc["cross_check"]["counts_agree"]
    assert csv.read_text().splitlines()[0] == "line,u,x,y,z"
    rc, doc, _ = run(capsys, "fourlines", "--s4", "inf")
    assert rc == 0 and len(doc["lines"]) == 2
    rc, doc, _ = run(capsys, "fourlines", "--monotone", "1/10", "3")
    assert doc["ordering"] == "11212" and doc["real"] == 2


def test_monodromy_with_slides(capsys):
    rc, doc, _ = run(
        capsys, "monodromy", "--n", "1", "--d", "3", "--base", "1/10,37/100,62/100,85/100", "--loop", "rot:1", "--slides"
    )
    assert rc == 0
    assert sorted(doc["permutation"]) == [0, 1]
    assert sorted(doc["slide_permutation"]) == [0, 1]


def test_bethe_and_gaudin(capsys):
    rc, doc, _ = run(capsys, "bethe", "--n", "1", "--d", "3", "--roots", "-1,0,1,2")
    assert rc == 0 and len(doc["orbits"]) == doc["expected"] == 2
    assert all(o["real"] for o in doc["orbits"])
    rc, doc, _ = run(capsys, "gaudin", "--n", "1", "--d", "3", "--roots", "-1,0,1,2", "--checks", "singular,eigen")
    assert rc == 0 and doc["ok"]


def test_zmatrix_and_cm(capsys):
    rc, doc, _ = run(capsys, "zmatrix", "--b", "0,1", "--a", "-1,2")
    assert rc == 0 and doc["wronskian_roots_match"] < 1e-30 and doc["alpha_real"]
    rc, doc, _ = run(capsys, "cm", "--sample", "10", "--size", "3")
    assert rc == 0 and doc["reality"]["violations"] == 0 and doc["roundtrip"]["ok"]


def test_experiment_resume(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "wronski-reality", "trials": 6, "seed": 1, "n": 1, "d": 3}))
    out = tmp_path / "out"
    rc, doc, _ = run(capsys, "experiment", "--config", str(cfg), "--out", str(out), "--stop-after", "2")
    assert rc == 0 and doc["recorded"] == 2
    rc, doc, _ = run(capsys, "experiment", "--config", str(cfg), "--out", str(out), "--workers", "2")
    assert doc["recorded"] == doc["completed"] == 6
    assert (out / "results.csv").read_text().splitlines()[1] == "random,0,6,0"


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["nope"])
