"""Monte-Carlo experiment driver and result files.

Every trial derives one seed from the base seed and draws four independent
streams from it: scenario, random, greedy, learning. The scenario stream is
consumed the same way whichever schedulers are selected, so all schedulers
in a trial see identical inputs.
"""
from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .config import SystemConfig
from .schedulers import (DEFAULT_BUDGET, BudgetExceeded, EvalCounter, exhaustive_search,
                         greedy_schedule, learning_schedule, random_schedule)
from .utility import Scenario

log = logging.getLogger(__name__)

SCHEDULERS = ("random", "exhaustive", "greedy", "learning")
_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_seed(base_seed: int, trial: int) -> int:
    return (base_seed ^ _splitmix64(trial)) & _MASK64


@dataclass
class ExperimentSpec:
    config: SystemConfig
    schedulers: tuple[str, ...] = SCHEDULERS
    trials: int = 200
    base_seed: int | None = None  # None -> config.rng_seed
    out_dir: Path | None = None
    budget: int = DEFAULT_BUDGET
    workers: int = 1

    def __post_init__(self):
        self.schedulers = tuple(self.schedulers)
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not self.schedulers:
            raise ValueError("select at least one scheduler")
        unknown = [s for s in self.schedulers if s not in SCHEDULERS]
        if unknown:
            raise ValueError(f"unknown schedulers {unknown}; choose from {list(SCHEDULERS)}")
        if len(set(self.schedulers)) != len(self.schedulers):
            raise ValueError("scheduler listed twice")
        if "exhaustive" in self.schedulers and self.config.joint_space_size > self.budget:
            cfg = self.config
            raise BudgetExceeded(
                f"exhaustive search over (M!)^N = {cfg.num_sequences}^{cfg.num_aps_N} = "
                f"{cfg.joint_space_size:,} joint schedules exceeds the budget of "
                f"{self.budget:,}; drop 'exhaustive' or raise the budget")
        if self.base_seed is None:
            self.base_seed = self.config.rng_seed
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class TrialOutcome:
    trial: int
    seed: int
    utility: dict[str, float]
    evaluations: dict[str, int]
    traces: dict[str, list[tuple]] = field(default_factory=dict)


GREEDY_TRACE_COLUMNS = ("trial", "iteration", "ap", "sequence", "own_utility",
                        "network_utility")
LEARNING_TRACE_COLUMNS = ("trial", "iteration", "ap", "sequence", "utility", "u_max",
                          "max_prob")


def run_trial(config: SystemConfig, trial: int, seed: int, schedulers, budget: int,
              keep_traces: bool = True) -> TrialOutcome:
    s_scen, s_rand, s_greedy, s_learn = np.random.SeedSequence(seed).spawn(4)
    scenario = Scenario.generate(config, np.random.default_rng(s_scen))
    out = TrialOutcome(trial, seed, {}, {})
    for name in schedulers:
        counter = EvalCounter()
        if name == "random":
            joint = random_schedule(np.random.default_rng(s_rand), scenario.num_ues,
                                    scenario.num_aps)
            value = scenario.network_utility(joint)
            counter.add()
        elif name == "exhaustive":
            value = exhaustive_search(scenario, budget, counter).utility
        elif name == "greedy":
            res = greedy_schedule(scenario, config.greedy_iters_NDG,
                                  np.random.default_rng(s_greedy), counter)
            value = res.utility
            if keep_traces:
                out.traces[name] = [(trial, s.iteration, s.ap, s.index, s.own_utility,
                                     s.network_utility) for s in res.trace]
        else:
            res = learning_schedule(scenario, config.learning_weight_w,
                                    config.max_learning_iters_T,
                                    np.random.default_rng(s_learn), counter)
            value = res.utility
            if keep_traces:
                out.traces[name] = [(trial, s.iteration, s.ap, s.index, s.utility, s.u_max,
                                     s.max_prob) for s in res.state.trace]
        out.utility[name] = value
        out.evaluations[name] = counter.count
    return out


def _run_trial_args(args):
    return run_trial(*args)


def empirical_cdf(samples) -> list[tuple[float, float]]:
    """Distinct sample values with the fraction of samples at or below each."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("empirical CDF of an empty sample")
    values, counts = np.unique(x, return_counts=True)
    cum = np.cumsum(counts) / x.size
    return [(float(v), float(c)) for v, c in zip(values, cum)]


@dataclass
class ResultSet:
    config: SystemConfig
    schedulers: tuple[str, ...]
    seeds: list[int]
    utilities: dict[str, np.ndarray]  # per scheduler, indexed by trial
    evaluations: dict[str, np.ndarray]
    traces: dict[str, list[tuple]] = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return len(self.seeds)

    def cdf(self, scheduler: str) -> list[tuple[float, float]]:
        return empirical_cdf(self.utilities[scheduler])

    def summary(self) -> dict[str, dict]:
        out = {}
        for name in self.schedulers:
            u = self.utilities[name]
            out[name] = {
                "trials": int(u.size),
                "mean": float(np.mean(u)),
                "variance": float(np.var(u, ddof=1)) if u.size > 1 else 0.0,
                "evaluations_total": int(self.evaluations[name].sum()),
            }
        return out

    def write(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.json").write_text(json.dumps(asdict(self.config), indent=2) + "\n")
        summary = self.summary()
        for name in self.schedulers:
            _write_rows(out / f"trials_{name}.csv", ("trial", "seed", "network_utility"),
                        [(t, s, u) for t, (s, u) in
                         enumerate(zip(self.seeds, self.utilities[name]))])
            _write_rows(out / f"cdf_{name}.csv", ("network_utility", "cumulative_fraction"),
                        self.cdf(name))
            _write_rows(out / f"counters_{name}.csv", ("trial", "evaluations"),
                        list(enumerate(self.evaluations[name])))
            s = summary[name]
            _write_rows(out / f"summary_{name}.csv", tuple(s), [tuple(s.values())])
            if name in self.traces:
                cols = GREEDY_TRACE_COLUMNS if name == "greedy" else LEARNING_TRACE_COLUMNS
                _write_rows(out / f"trace_{name}.csv", cols, self.traces[name])

    @classmethod
    def load(cls, out_dir: str | Path) -> "ResultSet":
        out = Path(out_dir)
        config = SystemConfig.from_dict(json.loads((out / "config.json").read_text()))
        names = [n for n in SCHEDULERS if (out / f"trials_{n}.csv").exists()]
        if not names:
            raise FileNotFoundError(f"no trials_*.csv files in {out}")
        seeds, utilities, evaluations, traces = None, {}, {}, {}
        for name in names:
            rows = _read_rows(out / f"trials_{name}.csv")
            seeds = [int(r["seed"]) for r in rows]
            utilities[name] = np.array([float(r["network_utility"]) for r in rows])
            evaluations[name] = np.array(
                [int(r["evaluations"]) for r in _read_rows(out / f"counters_{name}.csv")])
            trace_path = out / f"trace_{name}.csv"
            if trace_path.exists():
                traces[name] = [tuple(_parse(v) for v in r.values())
                                for r in _read_rows(trace_path)]
        return cls(config, tuple(names), seeds, utilities, evaluations, traces)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _read_rows(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run_experiment(spec: ExperimentSpec, keep_traces: bool = True) -> ResultSet:
    config = spec.config
    seeds = [trial_seed(spec.base_seed, t) for t in range(spec.trials)]
    jobs = [(config, t, seeds[t], spec.schedulers, spec.budget, keep_traces)
            for t in range(spec.trials)]
    log.info("running %d trials of %s", spec.trials, ", ".join(spec.schedulers))
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            outcomes = list(pool.map(_run_trial_args, jobs, chunksize=4))
    else:
        outcomes = [_run_trial_args(job) for job in jobs]
    outcomes.sort(key=lambda o: o.trial)

    utilities = {n: np.array([o.utility[n] for o in outcomes]) for n in spec.schedulers}
    evaluations = {n: np.array([o.evaluations[n] for o in outcomes], dtype=np.int64)
                   for n in spec.schedulers}
    traces = {}
    for name in ("greedy", "learning"):
        if keep_traces and name in spec.schedulers:
            traces[name] = [row for o in outcomes for row in o.traces[name]]
    result = ResultSet(config, spec.schedulers, seeds, utilities, evaluations, traces)
    if spec.out_dir is not None:
        result.write(spec.out_dir)
    return result
