import json

import pytest

from wronskit.errors import InvalidInputError
from wronskit.harness import (
    ExperimentConfig,
    ExperimentRecord,
    SecantScenario,
    TrialResult,
    ordering_windows,
    overlap_number,
    report,
    run_experiment,
    run_trial,
    table_rows,
)


def _read(path):
    return path.read_bytes()


def test_config_validation():
    with pytest.raises(InvalidInputError):
        ExperimentConfig("no-such-scenario", trials=3)
    with pytest.raises(InvalidInputError):
        ExperimentConfig("wronski-reality", trials=0, n=1, d=3)
    with pytest.raises(InvalidInputError):
        ExperimentConfig("wronski-reality", trials=3)
    with pytest.raises(InvalidInputError):
        ExperimentConfig("monotone-fourlines", trials=3, params={"ordering": "11112"})
    with pytest.raises(InvalidInputError):
        ExperimentConfig("zmatrix-sample", trials=3, params={"colour": 1})
    with pytest.raises(InvalidInputError):
        ExperimentConfig.from_json({"scenario": "zmatrix-sample", "trials": 3, "extra": 1})


def test_config_fingerprint_ignores_workers_and_trials():
    a = ExperimentConfig("zmatrix-sample", trials=3, seed=1)
    b = ExperimentConfig("zmatrix-sample", trials=30, seed=1, workers=4)
    c = ExperimentConfig("zmatrix-sample", trials=3, seed=2)
    assert a.fingerprint() == b.fingerprint() != c.fingerprint()


def test_overlap_number_cases():
    disjoint = SecantScenario([(-4, -2), (-1, 0), (1, 3)], [(-3.5, -2.5), (-0.8, -0.2), (1.5, 2.5)])
    assert overlap_number(disjoint) == 0
    assert set(disjoint.pair_relations().values()) == {"disjoint"}
    identical = SecantScenario([(0, 1), (0, 1)], [(0.2, 0.8), (0.2, 0.8)])
    assert overlap_number(identical) == 4
    assert identical.pair_relations() == {(0, 1): "identical"}
    nested = SecantScenario([(0, 1), (0, 1)], [(0.1, 0.9), (0.3, 0.6)])
    interleaved = SecantScenario([(0, 1), (0, 1)], [(0.1, 0.5), (0.3, 0.9)])
    assert overlap_number(nested) == 2 and overlap_number(interleaved) == 2
    assert nested.pair_relations()[(0, 1)] == "nested"
    assert interleaved.pair_relations()[(0, 1)] == "interleaved"
    # identical arcs reach the maximum 2k for a pair of k-point flags
    assert overlap_number(identical) > overlap_number(nested)


def test_secant_scenario_validation():
    with pytest.raises(InvalidInputError):
        SecantScenario([(1, 0)], [(0.5, 0.6)])
    with pytest.raises(InvalidInputError):
        SecantScenario([(0, 1)], [(0.5, 1.5)])


def test_ordering_windows():
    assert ordering_windows("11122", 6) == [(1.0, 6), (1.0, 6)]
    assert ordering_windows("11212", 6) == [(0.0, 1.0), (1.0, 6)]
    assert ordering_windows("21112", 6) == [(-6, -1.0), (1.0, 6)]


def test_trials_are_reproducible_per_index():
    cfg = ExperimentConfig("monotone-fourlines", trials=5, seed=9, params={"ordering": "11212"})
    a, b = run_trial(cfg, 3), run_trial(cfg, 3)
    assert a.params == b.params and a.real == b.real


def test_trial_result_invariants():
    with pytest.raises(InvalidInputError):
        TrialResult(0, "x", {}, 1, 2, 2, True, 0.0, 0.0)
    assert not TrialResult(0, "x", {}, 3, 2, 3, True, 0.0, 0.0).parity_ok
    assert TrialResult(0, "x", {}, 3, 2, 3, True, 0.0, 0.0, real_data=False).parity_ok


def test_wronski_reality_table(tmp_path):
    cfg = ExperimentConfig("wronski-reality", trials=12, seed=5, n=1, d=3)
    rec = run_experiment(cfg, tmp_path)
    assert rec.frequency_table() == {"random": {2: 12}}
    lines = (tmp_path / "results.csv").read_text().splitlines()
    assert lines == ["ordering,real_0,real_2,incomplete", "random,0,12,0"]
    doc = json.loads((tmp_path / "results.json").read_text())
    assert doc["completed"] == 12 and doc["parity_violations"] == []
    assert doc["seeds"]["master"] == 5 and "numpy" in doc["versions"]


def test_determinism_resume_and_workers(tmp_path):
    cfg = ExperimentConfig("wronski-reality", trials=16, seed=3, n=1, d=3)
    run_experiment(cfg, tmp_path / "a")
    run_experiment(cfg, tmp_path / "b")
    run_experiment(cfg, tmp_path / "c", stop_after=7)
    assert len((tmp_path / "c" / "trials.jsonl").read_text().splitlines()) == 7
    run_experiment(cfg, tmp_path / "c")
    par = ExperimentConfig("wronski-reality", trials=16, seed=3, n=1, d=3, workers=3)
    run_experiment(par, tmp_path / "d")
    for name in ("results.csv", "trials.csv"):
        ref = _read(tmp_path / "a" / name)
        for other in "bcd":
            assert _read(tmp_path / other / name) == ref


def test_resume_survives_a_torn_line(tmp_path):
    cfg = ExperimentConfig("zmatrix-sample", trials=10, seed=1)
    run_experiment(cfg, tmp_path / "a")
    run_experiment(cfg, tmp_path / "b", stop_after=4)
    with open(tmp_path / "b" / "trials.jsonl", "a") as fh:
        fh.write('{"index": 4, "cls"')
    run_experiment(cfg, tmp_path / "b")
    assert _read(tmp_path / "a" / "results.csv") == _read(tmp_path / "b" / "results.csv")


def test_resume_refuses_other_configs(tmp_path):
    run_experiment(ExperimentConfig("zmatrix-sample", trials=2, seed=1), tmp_path)
    with pytest.raises(InvalidInputError):
        run_experiment(ExperimentConfig("zmatrix-sample", trials=2, seed=2), tmp_path)


def test_secant_table_layout(tmp_path):
    cfg = ExperimentConfig("secant-fourlines", trials=6, seed=2)
    rec = run_experiment(cfg, tmp_path)
    header, rows = table_rows(rec)
    assert header == ["real", "overlap_0", "total"]
    assert rows == [[0, 0, 0], [2, 6, 6]]


def test_secant_overlapping_arcs(tmp_path):
    arcs = [[-3.0, 3.0], [-2.0, 2.5], [-2.5, 3.5], [-3.5, 2.0]]
    rec = run_experiment(ExperimentConfig("secant-fourlines", trials=8, seed=4, params={"arcs": arcs}))
    assert all(int(t.cls) > 0 for t in rec.trials)
    header, rows = table_rows(rec)
    assert header[0] == "real" and header[-1] == "total"
    assert sum(r[-1] for r in rows if r[0] != "incomplete") == 8


def test_monotone_table(tmp_path):
    rec = run_experiment(ExperimentConfig("monotone-fourlines", trials=20, seed=0, params={"ordering": "11122"}))
    assert rec.frequency_table() == {"11122": {2: 20}}


def test_empty_record_gives_header_only(tmp_path):
    cfg = ExperimentConfig("zmatrix-sample", trials=1)
    report(ExperimentRecord(cfg, []), tmp_path)
    assert (tmp_path / "results.csv").read_text() == "ordering,real_0,real_1,real_2,incomplete\n"
    report(ExperimentRecord(ExperimentConfig("secant-fourlines", trials=1), []), tmp_path / "s")
    assert (tmp_path / "s" / "results.csv").read_text() == "real,overlap_0,total\n"


def test_zmatrix_and_gaudin_scenarios():
    rec = run_experiment(ExperimentConfig("zmatrix-sample", trials=30, seed=1))
    assert rec.frequency_table()["size=2"].get(2, 0) == 0
    rec = run_experiment(ExperimentConfig("gaudin-checks", trials=2, seed=1, n=1, d=3))
    assert [t.cls for t in rec.trials] == ["checks-ok", "checks-ok"]


def test_failures_are_recorded_not_dropped(monkeypatch):
    from wronskit import harness
    from wronskit.errors import SolverFailureError

    def boom(cfg, rng):
        raise SolverFailureError("no convergence")

    monkeypatch.setitem(harness.TRIALS, "zmatrix-sample", boom)
    rec = run_experiment(ExperimentConfig("zmatrix-sample", trials=3))
    assert len(rec.trials) == 3 and not rec.completed()
    assert rec.incomplete_by_class() == {"failed": 3}
    assert all("SolverFailureError" in t.error for t in rec.trials)
