"""Spin-the-bottle sort, Annealing sort and baselines, instrumented.

Every sort works in place on a list.  Elements are compared with their
natural ordering; plain values with duplicates are tie-broken by position,
which is the same order :class:`~oblivisort.core.TaggedElement` gives.
Internally each run operates on the rank array of the input so the compiled
kernels only ever see int64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import MutableSequence, Union

import numpy as np

from . import _kernels
from .core import ContractError, RngStream
from .metrics import count_inversions
from .schedule import AnnealingSchedule, check
from .trace import Trace

_NO_BUFFER = np.empty((0, 2), dtype=np.int64)


@dataclass
class SortReport:
    n: int
    comparisons: int
    swaps: int
    rounds: int
    sorted: bool
    initial_inversions: int
    final_inversions: int
    scan_comparisons: int = 0  # sortedness checks, kept out of `comparisons`


@dataclass(frozen=True)
class CheckSorted:
    """Scan the array after each round; stop once it is sorted."""


@dataclass(frozen=True)
class FixedBudget:
    """Run exactly ``rounds`` rounds regardless of the data."""

    rounds: int

    def __post_init__(self):
        if self.rounds < 0:
            raise ContractError(f"round budget must be >= 0, got {self.rounds}")


TerminationMode = Union[CheckSorted, FixedBudget]


def default_spin_budget(n: int) -> int:
    """ceil(4n + 2 n ln n) rounds: Phase-1 bound plus the Phase-3 tail shape."""
    if n < 2:
        return 0
    return math.ceil(4 * n + 2 * n * math.log(n))


class _Run:
    """Rank-array view of a list plus the generator state shared with the kernels."""

    def __init__(self, array: MutableSequence, rng: RngStream | None = None):
        self.array = array
        self.n = len(array)
        order = sorted(range(self.n), key=array.__getitem__)
        self.by_rank = [array[k] for k in order]
        self.ranks = np.empty(self.n, dtype=np.int64)
        self.ranks[order] = np.arange(self.n)
        self.rng = rng
        self.st = np.array(rng.getstate(), dtype=np.uint64) if rng is not None else None

    def inversions(self) -> int:
        if _kernels.is_sorted(self.ranks):
            return 0
        return count_inversions(self.ranks.tolist())

    def scan(self) -> tuple[bool, int]:
        """Sortedness check and the number of comparisons it charged."""
        return bool(_kernels.is_sorted(self.ranks)), max(0, self.n - 1)

    def buffer(self, size: int, recorder: Trace | None) -> np.ndarray:
        return np.empty((size, 2), dtype=np.int64) if recorder is not None else _NO_BUFFER

    def finish(self) -> None:
        self.array[:] = [self.by_rank[r] for r in self.ranks.tolist()]
        if self.rng is not None:
            self.rng.setstate(tuple(int(x) for x in self.st))


def _check_recorder(recorder: Trace | None, n: int) -> None:
    if recorder is not None and recorder.n != n:
        raise ContractError(f"recorder has {recorder.n} wires, array has {n} cells")


def _report(run: _Run, initial: int, comparisons: int, swaps: int, rounds: int, scans: int = 0) -> SortReport:
    final = run.inversions()
    return SortReport(run.n, comparisons, swaps, rounds, final == 0, initial, final, scans)


def _spin_round(run: _Run, recorder: Trace | None) -> int:
    buf = run.buffer(run.n, recorder)
    swaps, _ = _kernels.spin_round(run.ranks, run.st, buf, 0)
    if recorder is not None:
        recorder.extend(buf)
    return swaps


def spin_round(array: MutableSequence, rng: RngStream, recorder: Trace | None = None) -> tuple[int, int]:
    """One round: every cell i meets a uniformly random partner s != i.

    Returns ``(comparisons, swaps)``; comparisons is always ``n``.
    """
    n = len(array)
    if n < 2:
        raise ContractError(f"a spin round needs n >= 2, got {n}")
    _check_recorder(recorder, n)
    run = _Run(array, rng)
    swaps = _spin_round(run, recorder)
    run.finish()
    return n, swaps


def spin_the_bottle_sort(array: MutableSequence, rng: RngStream, mode: TerminationMode = CheckSorted(),
                         recorder: Trace | None = None) -> SortReport:
    n = len(array)
    if n < 1:
        raise ContractError("cannot sort an empty array")
    _check_recorder(recorder, n)
    run = _Run(array, rng)
    initial = run.inversions()
    comparisons = swaps = rounds = scans = 0
    if n >= 2:
        if isinstance(mode, FixedBudget):
            for _ in range(mode.rounds):
                swaps += _spin_round(run, recorder)
                comparisons += n
                rounds += 1
        elif isinstance(mode, CheckSorted):
            while True:
                done, cost = run.scan()
                scans += cost
                if done:
                    break
                swaps += _spin_round(run, recorder)
                comparisons += n
                rounds += 1
        else:
            raise ContractError(f"unknown termination mode {mode!r}")
    run.finish()
    return _report(run, initial, comparisons, swaps, rounds, scans)


def _annealing_pass(run: _Run, temp: int, reps: int, recorder: Trace | None) -> int:
    buf = run.buffer(2 * (run.n - 1) * reps, recorder)
    swaps, _ = _kernels.annealing_pass(run.ranks, temp, reps, run.st, buf, 0)
    if recorder is not None:
        recorder.extend(buf)
    return swaps


def annealing_pass(array: MutableSequence, temp: int, reps: int, rng: RngStream,
                   recorder: Trace | None = None) -> tuple[int, int]:
    """One up-pass and one down-pass with partners at distance at most ``temp``.

    Returns ``(comparisons, swaps)``; comparisons is always ``2 (n - 1) reps``.
    """
    n = len(array)
    if temp < 1 or reps < 1:
        raise ContractError(f"need temperature >= 1 and repetitions >= 1, got {temp}, {reps}")
    if n < 2:
        raise ContractError(f"an annealing pass needs n >= 2, got {n}")
    _check_recorder(recorder, n)
    run = _Run(array, rng)
    swaps = _annealing_pass(run, temp, reps, recorder)
    run.finish()
    return 2 * (n - 1) * reps, swaps


def annealing_sort(array: MutableSequence, schedule: AnnealingSchedule, rng: RngStream,
                   recorder: Trace | None = None) -> SortReport:
    check(schedule)
    n = len(array)
    _check_recorder(recorder, n)
    run = _Run(array, rng)
    initial = run.inversions()
    comparisons = swaps = rounds = 0
    if n >= 2:
        for temp, reps in schedule.active():
            swaps += _annealing_pass(run, temp, reps, recorder)
            comparisons += 2 * (n - 1) * reps
            rounds += 1
    run.finish()
    return _report(run, initial, comparisons, swaps, rounds)


def default_guess_budget(n: int) -> int:
    """Ten times the n^2 ln n expectation, rounded up to whole checks of n draws."""
    if n < 2:
        return 0
    return n * math.ceil(10 * n * math.log(n))


def guess_sort(array: MutableSequence, rng: RngStream, max_comparisons: int | None = None,
               recorder: Trace | None = None) -> SortReport:
    """Compare-exchange uniformly random pairs, checking sortedness every n draws."""
    n = len(array)
    if n < 2:
        raise ContractError(f"guess sort needs n >= 2, got {n}")
    if max_comparisons is None:
        max_comparisons = default_guess_budget(n)
    if max_comparisons < 0:
        raise ContractError(f"comparison budget must be >= 0, got {max_comparisons}")
    _check_recorder(recorder, n)
    run = _Run(array, rng)
    initial = run.inversions()
    comparisons = swaps = rounds = scans = 0
    while True:
        done, cost = run.scan()
        scans += cost
        if done or comparisons >= max_comparisons:
            break
        draws = min(n, max_comparisons - comparisons)
        buf = run.buffer(draws, recorder)
        s, _ = _kernels.guess_draws(run.ranks, draws, run.st, buf, 0)
        if recorder is not None:
            recorder.extend(buf)
        swaps += s
        comparisons += draws
        rounds += 1
    run.finish()
    return _report(run, initial, comparisons, swaps, rounds, scans)


def bubble_sort(array: MutableSequence) -> SortReport:
    """Adjacent passes until one pass makes no swap."""
    run = _Run(array)
    initial = run.inversions()
    comparisons = swaps = rounds = 0
    if run.n >= 2:
        while True:
            s = _kernels.bubble_pass(run.ranks)
            comparisons += run.n - 1
            swaps += s
            rounds += 1
            if not s:
                break
    run.finish()
    return _report(run, initial, comparisons, swaps, rounds)


def oracle_sort(array) -> list:
    """Ground truth: the input in nondecreasing order (stable for plain values)."""
    return sorted(array)
