"""Compare-exchange traces viewed as sorting networks.

A :class:`Trace` stores gates as 1-based ``(low, high)`` wire pairs in
execution order.  The zero-one certifier evaluates every binary input at once
by carrying, per wire, one big integer whose bit ``v`` is that wire's value
on input vector ``v``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .core import ContractError

DEFAULT_EXHAUSTION_CAP = 20


class Trace:
    """Ordered compare-exchange gates on ``n`` wires."""

    def __init__(self, n: int, ops: Iterable[tuple[int, int]] | np.ndarray = ()):
        if n < 0:
            raise ContractError(f"wire count must be non-negative, got {n}")
        self.n = n
        self._blocks: list[np.ndarray] = []
        self._cache: np.ndarray | None = None
        arr = np.asarray(list(ops) if not isinstance(ops, np.ndarray) else ops, dtype=np.int64)
        if arr.size:
            self.extend(arr)

    def extend(self, block: np.ndarray) -> None:
        block = np.asarray(block, dtype=np.int64).reshape(-1, 2)
        if not block.size:
            return
        lo = block.min(axis=1)
        hi = block.max(axis=1)
        if (lo == hi).any():
            raise ContractError("trace gate joins a wire to itself")
        if lo.min() < 1 or hi.max() > self.n:
            raise ContractError(f"trace gate outside wires 1..{self.n}")
        self._blocks.append(np.stack([lo, hi], axis=1))
        self._cache = None

    def append(self, i: int, j: int) -> None:
        self.extend(np.array([[i, j]]))

    @property
    def ops(self) -> np.ndarray:
        """All gates as an ``(m, 2)`` int64 array."""
        if self._cache is None:
            if not self._blocks:
                self._cache = np.empty((0, 2), dtype=np.int64)
            elif len(self._blocks) == 1:
                self._cache = self._blocks[0]
            else:
                self._cache = np.concatenate(self._blocks)
                self._blocks = [self._cache]
        return self._cache

    def __len__(self) -> int:
        return sum(len(b) for b in self._blocks)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        for i, j in self.ops:
            yield int(i), int(j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.ops, other.ops)

    def __repr__(self) -> str:
        return f"Trace(n={self.n}, ops={len(self)})"

    def to_text(self) -> str:
        ops = self.ops
        lines = [f"wires {self.n} ops {len(ops)}"]
        lines.extend(f"{i} {j}" for i, j in ops.tolist())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Trace":
        lines = text.split("\n")
        head = lines[0].split()
        if len(head) != 4 or head[0] != "wires" or head[2] != "ops":
            raise ContractError(f"bad trace header: {lines[0]!r}")
        try:
            n, m = int(head[1]), int(head[3])
        except ValueError:
            raise ContractError(f"bad trace header: {lines[0]!r}") from None
        body = [ln for ln in lines[1:] if ln.strip()]
        if len(body) != m:
            raise ContractError(f"trace header announces {m} ops, found {len(body)}")
        try:
            ops = np.array([[int(t) for t in ln.split()] for ln in body], dtype=np.int64).reshape(-1, 2)
        except ValueError:
            raise ContractError("malformed trace line") from None
        return cls(n, ops)

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def read(cls, path: str | os.PathLike) -> "Trace":
        with open(path) as fh:
            return cls.from_text(fh.read())


@dataclass(frozen=True)
class NetworkStats:
    size: int
    depth: int


@dataclass(frozen=True)
class ZeroOneResult:
    certified: bool
    counterexample: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.certified


def _rank_order(array: Sequence) -> list[int]:
    # stable sort, so equal values are ordered by position
    return sorted(range(len(array)), key=array.__getitem__)


def replay(trace: Trace, array: Sequence) -> list:
    """Apply the trace's gates in order to a copy of ``array``."""
    if len(array) != trace.n:
        raise ContractError(f"array has {len(array)} cells, trace has {trace.n} wires")
    order = _rank_order(array)
    ranks = np.empty(len(array), dtype=np.int64)
    ranks[order] = np.arange(len(array))
    _kernels.replay(trace.ops, ranks)
    return [array[order[r]] for r in ranks.tolist()]


def _wire_patterns(n: int) -> list[int]:
    # wire w (1-based) carries bit (n - w) of the vector index, so index order
    # is lexicographic order of (x_1, ..., x_n)
    total = 1 << n
    full = (1 << total) - 1
    patterns = []
    for w in range(1, n + 1):
        half = 1 << (n - w)
        block = ((1 << half) - 1) << half
        repeat = full // ((1 << (2 * half)) - 1)
        patterns.append(block * repeat)
    return patterns


def verify_zero_one(trace: Trace, cap: int = DEFAULT_EXHAUSTION_CAP) -> ZeroOneResult:
    """Certify the trace sorts every 0-1 input of its width.

    On failure the lexicographically first failing input is returned.
    """
    n = trace.n
    if n > cap:
        raise ContractError(f"{n} wires exceeds the exhaustion cap of {cap}")
    if n <= 1:
        return ZeroOneResult(True)
    wires = _wire_patterns(n)
    for i, j in trace.ops.tolist():
        a, b = wires[i - 1], wires[j - 1]
        wires[i - 1] = a & b
        wires[j - 1] = a | b
    full = (1 << (1 << n)) - 1
    bad = 0
    for w in range(n - 1):
        bad |= wires[w] & (full ^ wires[w + 1])
    if not bad:
        return ZeroOneResult(True)
    v = (bad & -bad).bit_length() - 1
    return ZeroOneResult(False, tuple((v >> (n - w)) & 1 for w in range(1, n + 1)))


def network_depth(trace: Trace) -> NetworkStats:
    """Greedy layering: each gate goes one layer past the last gate on either wire."""
    last = [0] * (trace.n + 1)
    depth = 0
    for i, j in trace.ops.tolist():
        layer = max(last[i], last[j]) + 1
        last[i] = last[j] = layer
        depth = max(depth, layer)
    return NetworkStats(size=len(trace), depth=depth)


def obliviousness_check(config, seed: int, inputs: Sequence[Sequence]) -> bool:
    """Run one algorithm per input under the same seed and compare the traces.

    ``config`` is an :class:`~oblivisort.schedule.AnnealingSchedule` or a
    :class:`~oblivisort.algorithms.FixedBudget` (Spin-the-bottle).
    """
    from .algorithms import CheckSorted, FixedBudget, annealing_sort, spin_the_bottle_sort
    from .core import RngStream, tag
    from .schedule import AnnealingSchedule

    if isinstance(config, CheckSorted):
        raise ContractError("CheckSorted termination depends on the data; no obliviousness to check")
    if not isinstance(config, (FixedBudget, AnnealingSchedule)):
        raise ContractError(f"unsupported configuration {config!r}")
    if not inputs:
        raise ContractError("need at least one input")
    n = len(inputs[0])
    if any(len(x) != n for x in inputs):
        raise ContractError("inputs must share one length")

    first = None
    for keys in inputs:
        array = tag(keys)
        rec = Trace(n)
        rng = RngStream(seed)
        if isinstance(config, FixedBudget):
            spin_the_bottle_sort(array, rng, config, recorder=rec)
        else:
            annealing_sort(array, config, rng, recorder=rec)
        if first is None:
            first = rec
        elif rec != first:
            return False
    return True
