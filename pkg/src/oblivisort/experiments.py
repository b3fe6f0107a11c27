"""Trial runner, scaling benches, log-log fits and the practical-preset sweep."""

from __future__ import annotations

import dataclasses
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import algorithms as alg
from .core import ContractError, RngStream, TaggedElement, derive_seed, tag
from .metrics import adversarial_input, random_permutation, reverse_input, sorted_input
from .schedule import AnnealingSchedule, practical_schedule, read_schedule, schedule_cost, theoretical_schedule
from .trace import Trace

ALGOS = ("spin", "anneal", "guess", "bubble")
INPUT_KINDS = ("random", "adversarial", "reverse", "sorted")
CSV_FIELDS = ("algo", "n", "seed", "schedule_id", "comparisons", "swaps", "rounds", "sorted", "wall_ns")

ALGO_STREAM = 0
INPUT_STREAM = 1


@dataclass(frozen=True)
class ExperimentRecord:
    algo: str
    n: int
    seed: int
    schedule_id: str
    comparisons: int
    swaps: int
    rounds: int
    sorted: bool
    wall_ns: int

    def csv(self) -> str:
        row = dataclasses.astuple(self)
        return ",".join(("true" if v else "false") if isinstance(v, bool) else str(v) for v in row)

    def deterministic_part(self) -> tuple:
        return dataclasses.astuple(self)[:-1]


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float


def loglog_slope(points: Iterable[tuple[float, float]]) -> SlopeFit:
    """Ordinary least squares of ln y on ln n."""
    pts = list(points)
    if len(pts) < 3:
        raise ContractError(f"a slope fit needs at least 3 points, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if (ns < 2).any() or (ys <= 0).any():
        raise ContractError("slope fit needs n >= 2 and y > 0")
    if len(set(ns.tolist())) < 3:
        raise ContractError("slope fit needs at least 3 distinct n values")
    x, y = np.log(ns), np.log(ys)
    xc = x - x.mean()
    slope = float((xc * (y - y.mean())).sum() / (xc * xc).sum())
    intercept = float(y.mean() - slope * x.mean())
    ss_res = float(((y - (intercept + slope * x)) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot <= 1e-300 else max(0.0, 1.0 - ss_res / ss_tot)
    return SlopeFit(slope, intercept, r2)


def make_input(kind: str, n: int, seed: int) -> list[TaggedElement]:
    if kind == "random":
        return random_permutation(n, RngStream(seed, INPUT_STREAM))
    if kind == "adversarial":
        return adversarial_input(n)
    if kind == "reverse":
        return reverse_input(n)
    if kind == "sorted":
        return sorted_input(n)
    raise ContractError(f"unknown input kind {kind!r}")


def resolve_schedule(spec: str, n: int) -> AnnealingSchedule:
    if spec == "preset:practical":
        return practical_schedule(n)
    if spec == "preset:theoretical":
        return theoretical_schedule(n)
    if spec.startswith("preset:"):
        raise ContractError(f"unknown schedule preset {spec!r}")
    try:
        return read_schedule(spec)
    except OSError as exc:
        raise ContractError(f"cannot read schedule file {spec!r}: {exc.strerror}") from None


def resolve_mode(budget: str | int | None, n: int) -> alg.TerminationMode:
    if budget is None:
        return alg.CheckSorted()
    if budget == "auto":
        return alg.FixedBudget(alg.default_spin_budget(n))
    return alg.FixedBudget(int(budget))


@dataclass(frozen=True)
class TrialSpec:
    algo: str
    n: int
    seed: int
    input_kind: str = "random"
    schedule: str = "preset:practical"
    budget: str | int | None = None


def run_trial(spec: TrialSpec, keys: Sequence | None = None,
              recorder: Trace | None = None) -> tuple[ExperimentRecord, alg.SortReport]:
    if spec.algo not in ALGOS:
        raise ContractError(f"unknown algorithm {spec.algo!r}")
    array = tag(keys) if keys is not None else make_input(spec.input_kind, spec.n, spec.seed)
    n = len(array)
    if n < 1:
        raise ContractError("n must be >= 1")
    rng = RngStream(spec.seed, ALGO_STREAM)
    schedule_id = ""
    t0 = time.perf_counter_ns()
    if spec.algo == "spin":
        report = alg.spin_the_bottle_sort(array, rng, resolve_mode(spec.budget, n), recorder)
    elif spec.algo == "anneal":
        schedule = resolve_schedule(spec.schedule, n)
        schedule_id = spec.schedule
        report = alg.annealing_sort(array, schedule, rng, recorder)
    elif spec.algo == "guess":
        budget = None if spec.budget in (None, "auto") else int(spec.budget)
        report = alg.guess_sort(array, rng, budget, recorder)
    else:
        report = alg.bubble_sort(array)
    wall = time.perf_counter_ns() - t0
    rec = ExperimentRecord(spec.algo, n, spec.seed, schedule_id, report.comparisons, report.swaps,
                           report.rounds, report.sorted, wall)
    return rec, report


def trial_seed(master: int, n: int, trial: int) -> int:
    return derive_seed(master, n, trial)


def _run_record(spec: TrialSpec) -> ExperimentRecord:
    return run_trial(spec)[0]


def bench(algo: str, sizes: Sequence[int], trials: int, seed: int, input_kind: str = "random",
          schedule: str = "preset:practical", budget: str | int | None = None,
          jobs: int = 1) -> list[ExperimentRecord]:
    """One record per (size, trial), in (size, trial) order."""
    specs = [TrialSpec(algo, n, trial_seed(seed, n, t), input_kind, schedule, budget)
             for n in sizes for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_run_record, specs, chunksize=max(1, len(specs) // (4 * jobs))))
    return [_run_record(s) for s in specs]


def mean_by_size(records: Iterable[ExperimentRecord], field: str = "comparisons") -> dict[int, float]:
    sums: dict[int, list[float]] = {}
    for r in records:
        sums.setdefault(r.n, []).append(getattr(r, field))
    return {n: float(np.mean(v)) for n, v in sorted(sums.items())}


def fit_records(records: Iterable[ExperimentRecord]) -> SlopeFit:
    return loglog_slope(mean_by_size(records).items())


@dataclass(frozen=True)
class CalibrationRow:
    n: int
    c_rep: int
    tail_rounds: int
    trials: int
    failures: int
    cost: int

    def csv(self) -> str:
        return ",".join(str(v) for v in dataclasses.astuple(self))


CALIBRATION_FIELDS = ("n", "c_rep", "tail_rounds", "trials", "failures", "cost")


def calibration_sweep(sizes: Sequence[int], c_reps: Sequence[int], tails: Sequence[int],
                      trials: int, seed: int) -> list[CalibrationRow]:
    """Count practical-preset failures on random permutations for each (n, c_rep, tail)."""
    rows = []
    for n in sizes:
        for c in c_reps:
            for tail in tails:
                schedule = practical_schedule(n, c, tail)
                failures = 0
                for t in range(trials):
                    s = trial_seed(seed, n, t)
                    array = random_permutation(n, RngStream(s, INPUT_STREAM))
                    failures += not alg.annealing_sort(array, schedule, RngStream(s, ALGO_STREAM)).sorted
                rows.append(CalibrationRow(n, c, tail, trials, failures, schedule_cost(schedule, n)))
    return rows


def pick_preset(rows: Sequence[CalibrationRow], headroom: int = 1) -> tuple[int, int]:
    """Cheapest (c_rep, tail) with zero failures at every swept n, with c_rep raised by ``headroom``."""
    by_setting: dict[tuple[int, int], list[CalibrationRow]] = {}
    for r in rows:
        by_setting.setdefault((r.c_rep, r.tail_rounds), []).append(r)
    clean = [(sum(r.cost for r in rs), key) for key, rs in by_setting.items() if all(r.failures == 0 for r in rs)]
    if not clean:
        raise ContractError("no swept setting was failure-free")
    c, tail = min(clean)[1]
    return c + headroom, tail
