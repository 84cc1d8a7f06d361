"""Experiment runner: frequency tables of real-solution counts over random instances.

A run is described by an :class:`ExperimentConfig`. Trial ``i`` draws its
parameters from ``numpy.random.default_rng([master_seed, i])``, so trials
can run in any order or on any worker without changing their outcome.
Finished trials are appended to ``trials.jsonl`` in the output directory;
rerunning with the same config skips them.
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .errors import InvalidInputError, WronskitError
from .polyring import default_precision_bits

SCENARIOS = (
    "wronski-reality",
    "clustered",
    "monotone-fourlines",
    "secant-fourlines",
    "zmatrix-sample",
    "gaudin-checks",
)

DEFAULT_PARAMS = {
    "wronski-reality": {"low": -5.0, "high": 5.0, "min_gap": 0.01},
    "clustered": {"ratio_low": 2.0, "ratio_high": 10.0, "start_ratio": 3.0},
    "monotone-fourlines": {"ordering": "11122", "span": 6.0, "min_gap": 1e-3},
    "secant-fourlines": {"arcs": [[-4.0, -2.0], [-1.5, -0.5], [0.0, 1.0], [1.5, 4.0]], "min_gap": 1e-3},
    "zmatrix-sample": {"size": 2, "alpha": "nonreal", "imag_tol": 1e-8},
    "gaudin-checks": {"low": -3.0, "high": 3.0, "min_gap": 0.05},
}

TABLE2_SCENARIOS = ("secant-fourlines",)


@dataclass
class ExperimentConfig:
    scenario: str
    trials: int
    seed: int = 0
    n: int | None = None
    d: int | None = None
    params: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise InvalidInputError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.trials < 1:
            raise InvalidInputError("trials must be at least 1")
        if self.workers < 1:
            raise InvalidInputError("workers must be at least 1")
        merged = dict(DEFAULT_PARAMS[self.scenario])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise InvalidInputError(f"unknown parameters for {self.scenario}: {sorted(unknown)}")
        merged.update(self.params)
        self.params = merged
        if self.scenario in ("wronski-reality", "clustered", "gaudin-checks"):
            if self.n is None or self.d is None or not 0 < self.n < self.d:
                raise InvalidInputError(f"{self.scenario} needs ambient 0 < n < d")
            if (self.n + 1) * (self.d - self.n) > 12:
                raise InvalidInputError("only (n+1)(d-n) <= 12 is supported")
        if self.scenario == "monotone-fourlines":
            word = self.params["ordering"]
            if sorted(word) != sorted("11122"):
                raise InvalidInputError("ordering must be a word of three 1s and two 2s")
        if self.scenario == "secant-fourlines":
            SecantScenario(self.params["arcs"], [tuple(a) for a in self.params["arcs"]])
        if self.scenario == "zmatrix-sample":
            if not 1 <= int(self.params["size"]) <= 8:
                raise InvalidInputError("size must be between 1 and 8")
            if self.params["alpha"] not in ("real", "nonreal"):
                raise InvalidInputError("alpha must be 'real' or 'nonreal'")
        if self.scenario == "gaudin-checks" and self.n not in (1, 2):
            raise InvalidInputError("gaudin-checks supports n in {1, 2}")

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        allowed = {"scenario", "trials", "seed", "n", "d", "params", "workers"}
        extra = set(data) - allowed
        if extra:
            raise InvalidInputError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return asdict(self)

    def fingerprint(self) -> str:
        """Hash of everything that determines trial outcomes (not worker count)."""
        data = self.to_json()
        data.pop("workers")
        data.pop("trials")
        text = json.dumps(data, sort_keys=True) + f"|prec={default_precision_bits()}"
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class TrialResult:
    index: int
    cls: str
    params: dict
    found: int
    real: int
    expected: int
    complete: bool
    residual: float
    wall_time: float
    real_data: bool = True
    error: str | None = None

    def __post_init__(self):
        if self.real > self.found:
            raise InvalidInputError("real count exceeds solution count")

    @property
    def parity_ok(self) -> bool:
        return not (self.real_data and self.complete) or (self.found - self.real) % 2 == 0


@dataclass
class ExperimentRecord:
    config: ExperimentConfig
    trials: list = field(default_factory=list)

    @property
    def layout(self) -> str:
        return "overlap" if self.config.scenario in TABLE2_SCENARIOS else "ordering"

    def sorted_trials(self) -> list:
        return sorted(self.trials, key=lambda t: t.index)

    def completed(self) -> list:
        return [t for t in self.trials if t.complete]

    def frequency_table(self) -> dict:
        """class -> Counter(real count), over completed trials."""
        table: dict = {}
        for t in self.sorted_trials():
            if t.complete:
                table.setdefault(t.cls, Counter())[t.real] += 1
        return table

    def incomplete_by_class(self) -> Counter:
        return Counter(t.cls for t in self.trials if not t.complete)

    def expected_total(self) -> int:
        return expected_solution_count(self.config)

    def parity_violations(self) -> list:
        return [t.index for t in self.trials if not t.parity_ok]


def expected_solution_count(cfg: ExperimentConfig) -> int:
    from .grassmann import degree_iota

    if cfg.scenario in ("wronski-reality", "clustered", "gaudin-checks"):
        return degree_iota(cfg.n, cfg.d)
    if cfg.scenario == "zmatrix-sample":
        return int(cfg.params["size"])
    return 2


# ---------------------------------------------------------------------------
# secant scenarios


@dataclass
class SecantScenario:
    """Flags secant to the cubic: flag i meets it at ``points[i]`` inside ``arcs[i]``.

    Arcs are closed intervals [a, b] with a < b on the real line.
    """

    arcs: list
    points: list

    def __post_init__(self):
        self.arcs = [tuple(float(x) for x in a) for a in self.arcs]
        self.points = [tuple(float(x) for x in p) for p in self.points]
        if len(self.arcs) != len(self.points):
            raise InvalidInputError("need one point set per arc")
        for (a, b), pts in zip(self.arcs, self.points):
            if not a < b:
                raise InvalidInputError("arcs must be intervals [a, b] with a < b")
            if any(not a <= p <= b for p in pts):
                raise InvalidInputError("points must lie in their flag's arc")

    def flag_arcs(self) -> list:
        """The arc actually spanned by each flag's points."""
        return [(min(p), max(p)) for p in self.points]

    def pair_relations(self) -> dict:
        """(i, j) -> disjoint / nested / interleaved / identical for the spanned arcs."""
        arcs = self.flag_arcs()
        out = {}
        for i in range(len(arcs)):
            for j in range(i + 1, len(arcs)):
                (a, b), (c, e) = arcs[i], arcs[j]
                if (a, b) == (c, e):
                    rel = "identical"
                elif b < c or e < a:
                    rel = "disjoint"
                elif (a <= c and e <= b) or (c <= a and b <= e):
                    rel = "nested"
                else:
                    rel = "interleaved"
                out[(i, j)] = rel
        return out


def overlap_number(scenario: SecantScenario) -> int:
    """Points of all flags lying in the spanned arc of some other flag, counted per (point, other flag)."""
    arcs = scenario.flag_arcs()
    total = 0
    for i, pts in enumerate(scenario.points):
        for j, (a, b) in enumerate(arcs):
            if i != j:
                total += sum(1 for p in pts if a <= p <= b)
    return total


# ---------------------------------------------------------------------------
# trials


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def _spread_sample(rng, k: int, low: float, high: float, gap: float) -> list:
    while True:
        x = np.sort(rng.uniform(low, high, size=k))
        if k < 2 or np.min(np.diff(x)) >= gap:
            return [float(v) for v in x]


def _trial_wronski(cfg: ExperimentConfig, rng) -> dict:
    from .wronski_solve import inverse_wronski, is_real_space

    p = cfg.params
    N = (cfg.n + 1) * (cfg.d - cfg.n)
    roots = _spread_sample(rng, N, p["low"], p["high"], p["min_gap"])
    fib = inverse_wronski(None, cfg.n, cfg.d, roots=roots, seed=int(rng.integers(2**31)))
    real = sum(is_real_space(s.space) for s in fib.solutions)
    res = max((float(s.residual) for s in fib.solutions), default=float("nan"))
    return dict(cls="random", params={"roots": roots}, found=len(fib.solutions), real=real, complete=fib.complete, residual=res)


def _trial_clustered(cfg: ExperimentConfig, rng) -> dict:
    from .wronski_solve import clustered_reality_probe

    p = cfg.params
    ratio = float(rng.uniform(p["ratio_low"], p["ratio_high"]))
    rep = clustered_reality_probe(cfg.n, cfg.d, ratio, start_ratio=p["start_ratio"], seed=int(rng.integers(2**31)))
    return dict(
        cls="clustered",
        params={"ratio": ratio, "min_jacobian_sv": rep.min_jacobian_sv},
        found=rep.count,
        real=sum(rep.real),
        complete=rep.count == rep.expected,
        residual=rep.max_residual,
    )


def ordering_windows(word: str, span: float) -> list:
    """Sampling window for each 2 in the word, from the number of 1s preceding it."""
    bounds = [(-span, -1.0), (-1.0, 0.0), (0.0, 1.0), (1.0, span)]
    out = []
    ones = 0
    for c in word:
        if c == "1":
            ones += 1
        else:
            out.append(bounds[ones])
    return out


def _trial_monotone(cfg: ExperimentConfig, rng) -> dict:
    from .fourlines import monotone_flag_instance

    p = cfg.params
    (a1, b1), (a2, b2) = ordering_windows(p["ordering"], p["span"])
    while True:
        v, w = float(rng.uniform(a1, b1)), float(rng.uniform(a2, b2))
        if v < w and w - v >= p["min_gap"] and min(abs(x - t) for x in (v, w) for t in (-1, 0, 1)) >= p["min_gap"]:
            break
    inst = monotone_flag_instance(v, w)
    return dict(cls=inst.word, params={"v": v, "w": w}, found=2, real=inst.real_count, complete=True, residual=0.0)


def _trial_secant(cfg: ExperimentConfig, rng) -> dict:
    from .fourlines import secant_line, transversals

    p = cfg.params
    points = [tuple(_spread_sample(rng, 2, a, b, p["min_gap"])) for a, b in p["arcs"]]
    scen = SecantScenario(p["arcs"], points)
    lines = [secant_line(a, b) for a, b in points]
    sols = transversals(lines)
    real = sum(L.is_real(1e-15) for L in sols)
    return dict(
        cls=str(overlap_number(scen)),
        params={"points": [list(x) for x in points]},
        found=len(sols),
        real=real,
        complete=True,
        residual=0.0,
    )


def _trial_zmatrix(cfg: ExperimentConfig, rng) -> dict:
    from .polyring import mp
    from .spectra import build_Z, sample_b, sample_nonreal_alpha

    p = cfg.params
    size = int(p["size"])
    b = sample_b(rng, size)
    if p["alpha"] == "nonreal":
        al = sample_nonreal_alpha(rng, size)
    else:
        al = rng.uniform(-5, 5, size=size).astype(complex)
    ev = build_Z([float(x) for x in b], [complex(x) for x in al]).eigenvalues()
    real = sum(abs(mp.im(e)) <= p["imag_tol"] for e in ev)
    return dict(
        cls=f"size={size}",
        params={"b": [float(x) for x in b], "alpha": [[float(x.real), float(x.imag)] for x in al]},
        found=size,
        real=real,
        complete=True,
        residual=0.0,
        real_data=p["alpha"] == "real",
    )


def _trial_gaudin(cfg: ExperimentConfig, rng) -> dict:
    from .gaudin import gaudin_instance_checks

    p = cfg.params
    N = (cfg.n + 1) * (cfg.d - cfg.n)
    s = _spread_sample(rng, N, p["low"], p["high"], p["min_gap"])
    rep = gaudin_instance_checks(cfg.n, cfg.d, s, seed=int(rng.integers(2**31)))
    eig = [c.deviation for c in rep.checks if c.name == "eigen"]
    failed = [c.name for c in rep.checks if not c.ok]
    return dict(
        cls="checks-ok" if rep.ok else "checks-failed",
        params={"s": s, "failed": failed},
        found=rep.orbits,
        real=rep.real_orbits,
        complete=rep.orbits == rep.expected,
        residual=max(eig, default=0.0),
    )


TRIALS: dict[str, Callable] = {
    "wronski-reality": _trial_wronski,
    "clustered": _trial_clustered,
    "monotone-fourlines": _trial_monotone,
    "secant-fourlines": _trial_secant,
    "zmatrix-sample": _trial_zmatrix,
    "gaudin-checks": _trial_gaudin,
}


def run_trial(cfg: ExperimentConfig, index: int) -> TrialResult:
    """One trial; solver failures become incomplete results instead of exceptions."""
    rng = trial_rng(cfg.seed, index)
    start = time.perf_counter()
    expected = expected_solution_count(cfg)
    try:
        out = TRIALS[cfg.scenario](cfg, rng)
    except (WronskitError, ArithmeticError) as exc:
        return TrialResult(index, "failed", {}, 0, 0, expected, False, float("nan"), time.perf_counter() - start, True, f"{type(exc).__name__}: {exc}")
    return TrialResult(
        index=index,
        cls=out["cls"],
        params=out["params"],
        found=int(out["found"]),
        real=int(out["real"]),
        expected=expected,
        complete=bool(out["complete"]),
        residual=float(out["residual"]),
        wall_time=time.perf_counter() - start,
        real_data=bool(out.get("real_data", True)),
    )


def _run_trial_json(cfg_json: dict, index: int) -> dict:
    return asdict(run_trial(ExperimentConfig.from_json(cfg_json), index))


# ---------------------------------------------------------------------------
# running and persistence

TRIALS_FILE = "trials.jsonl"
STATE_FILE = "state.json"


def _load_done(out: Path, cfg: ExperimentConfig) -> dict:
    state = out / STATE_FILE
    if not state.exists():
        return {}
    info = json.loads(state.read_text())
    if info.get("fingerprint") != cfg.fingerprint():
        raise InvalidInputError(f"{out} holds results of a different config; use another directory")
    done = {}
    path = out / TRIALS_FILE
    if path.exists():
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError:
                continue  # a line cut short by an interruption
            if row["index"] < cfg.trials:
                done[row["index"]] = TrialResult(**row)
    return done


def run_experiment(
    cfg: ExperimentConfig,
    out: str | os.PathLike | None = None,
    *,
    stop_after: int | None = None,
    progress: Callable[[TrialResult], None] | None = None,
) -> ExperimentRecord:
    """Run (or resume) all trials, then write the reports when ``out`` is given.

    ``stop_after`` ends the run after that many new trials, leaving a
    resumable partial state.
    """
    done: dict = {}
    sink = None
    if out is not None:
        outp = Path(out)
        outp.mkdir(parents=True, exist_ok=True)
        done = _load_done(outp, cfg)
        (outp / STATE_FILE).write_text(json.dumps({"fingerprint": cfg.fingerprint(), "config": cfg.to_json()}, indent=2))
        # rewrite the log with only valid rows so a torn last line does not linger
        with open(outp / TRIALS_FILE, "w") as fh:
            for idx in sorted(done):
                fh.write(json.dumps(asdict(done[idx])) + "\n")
        sink = open(outp / TRIALS_FILE, "a")
    pending = [i for i in range(cfg.trials) if i not in done]
    if stop_after is not None:
        pending = pending[:stop_after]
    try:
        for res in _execute(cfg, pending):
            done[res.index] = res
            if sink is not None:
                sink.write(json.dumps(asdict(res)) + "\n")
                sink.flush()
            if progress is not None:
                progress(res)
    finally:
        if sink is not None:
            sink.close()
    record = ExperimentRecord(cfg, [done[i] for i in sorted(done)])
    if out is not None:
        report(record, out)
    return record


def _execute(cfg: ExperimentConfig, indices: Sequence[int]):
    if cfg.workers == 1 or len(indices) < 2:
        for i in indices:
            yield run_trial(cfg, i)
        return
    cfg_json = cfg.to_json()
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for row in pool.map(_run_trial_json, [cfg_json] * len(indices), indices, chunksize=4):
            yield TrialResult(**row)


# ---------------------------------------------------------------------------
# reports


def _real_columns(record: ExperimentRecord) -> list[int]:
    total = record.expected_total()
    observed = {t.real for t in record.trials if t.complete}
    if record.config.scenario == "zmatrix-sample":
        base = set(range(total + 1))
    else:
        base = set(range(total % 2, total + 1, 2))
    return sorted(base | observed)


def table_rows(record: ExperimentRecord) -> tuple[list[str], list[list]]:
    """Header and rows of the frequency table in the layout of the scenario."""
    table = record.frequency_table()
    incomplete = record.incomplete_by_class()
    reals = _real_columns(record)
    if record.layout == "ordering":
        header = ["ordering"] + [f"real_{k}" for k in reals] + ["incomplete"]
        rows = []
        for cls in sorted(set(table) | set(incomplete)):
            counts = table.get(cls, Counter())
            rows.append([cls] + [counts.get(k, 0) for k in reals] + [incomplete.get(cls, 0)])
        return header, rows
    classes = sorted({int(c) for c in table} | {0})
    header = ["real"] + [f"overlap_{c}" for c in range(max(classes) + 1)] + ["total"]
    if not record.trials:
        return header, []
    rows = []
    for k in reals:
        cells = [table.get(str(c), Counter()).get(k, 0) for c in range(max(classes) + 1)]
        rows.append([k] + cells + [sum(cells)])
    failed = sum(incomplete.values())
    if failed:
        rows.append(["incomplete", *([""] * (max(classes) + 1)), failed])
    return header, rows


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if x != x else f"{x:.6e}"
    return str(x)


def report(record: ExperimentRecord, out: str | os.PathLike, fmt: str = "all") -> list[Path]:
    """Write results.csv (frequency table), trials.csv and results.json; returns the paths."""
    if fmt not in ("all", "csv", "json"):
        raise InvalidInputError("format must be csv, json or all")
    outp = Path(out)
    outp.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("all", "csv"):
        header, rows = table_rows(record)
        lines = [",".join(header)] + [",".join(_fmt(c) for c in r) for r in rows]
        (outp / "results.csv").write_text("\n".join(lines) + "\n")
        cols = ["index", "class", "found", "real", "expected", "complete", "residual"]
        tl = [",".join(cols)]
        for t in record.sorted_trials():
            tl.append(",".join(_fmt(v) for v in (t.index, t.cls, t.found, t.real, t.expected, int(t.complete), t.residual)))
        (outp / "trials.csv").write_text("\n".join(tl) + "\n")
        written += [outp / "results.csv", outp / "trials.csv"]
    if fmt in ("all", "json"):
        header, rows = table_rows(record)
        doc = {
            "config": record.config.to_json(),
            "fingerprint": record.config.fingerprint(),
            "seeds": {"scheme": "numpy default_rng([master_seed, trial_index])", "master": record.config.seed},
            "versions": _versions(),
            "completed": len(record.completed()),
            "trials_recorded": len(record.trials),
            "parity_violations": record.parity_violations(),
            "table": {"header": header, "rows": rows},
            "trials": [asdict(t) for t in record.sorted_trials()],
        }
        (outp / "results.json").write_text(json.dumps(doc, indent=2, default=str) + "\n")
        written.append(outp / "results.json")
    return written


def _versions() -> dict:
    import mpmath
    import scipy

    return {
        "wronskit": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "mpmath": mpmath.__version__,
        "precision_bits": default_precision_bits(),
    }
