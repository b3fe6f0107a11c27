"""Inversions, input generators and 0-1 region diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .core import ContractError, RngStream, TaggedElement, tag, uniform_in_range

PER_INDEX_LIMIT = 4096


@dataclass(frozen=True)
class InversionProfile:
    total: int
    per_index: tuple[int, ...] | None  # None when n > PER_INDEX_LIMIT


def _merge_count(seq: list) -> tuple[list, int]:
    n = len(seq)
    if n < 2:
        return seq, 0
    mid = n // 2
    left, a = _merge_count(seq[:mid])
    right, b = _merge_count(seq[mid:])
    merged = []
    count = a + b
    i = j = 0
    while i < len(left) and j < len(right):
        if right[j] < left[i]:
            merged.append(right[j])
            count += len(left) - i
            j += 1
        else:
            merged.append(left[i])
            i += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, count


def count_inversions(array: Sequence) -> int:
    """Number of pairs i < j with array[j] < array[i], by merge sort."""
    return _merge_count(list(array))[1]


def _per_index(array: Sequence) -> tuple[int, ...]:
    n = len(array)
    order = sorted(range(n), key=array.__getitem__)
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.arange(n)
    pos = np.arange(n)
    out = np.empty(n, dtype=np.int64)
    for start in range(0, n, 512):
        r = ranks[start:start + 512, None]
        p = pos[start:start + 512, None]
        out[start:start + 512] = ((pos < p) & (ranks > r)).sum(1) + ((pos > p) & (ranks < r)).sum(1)
    return tuple(out.tolist())


def inversion_count(array: Sequence) -> InversionProfile:
    total = count_inversions(array)
    per = _per_index(array) if len(array) <= PER_INDEX_LIMIT else None
    return InversionProfile(total, per)


def adversarial_input(n: int) -> list[TaggedElement]:
    """Adjacent-pair swapped sequence (2, 1, 4, 3, ..., n, n-1)."""
    if n % 2:
        raise ContractError(f"adversarial input pairs cells, n must be even (got {n})")
    keys = []
    for k in range(1, n, 2):
        keys += [k + 1, k]
    return tag(keys)


def random_permutation(n: int, rng: RngStream) -> list[TaggedElement]:
    keys = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = uniform_in_range(rng, 0, i)
        keys[i], keys[j] = keys[j], keys[i]
    return tag(keys)


def reverse_input(n: int) -> list[TaggedElement]:
    return tag(range(n, 0, -1))


def sorted_input(n: int) -> list[TaggedElement]:
    return tag(range(1, n + 1))


def zero_one(n: int, k: int, rng: RngStream | None = None) -> list[TaggedElement]:
    """0-1 keys with exactly ``k`` ones.

    With ``rng`` the ones land at uniformly random cells; without it they
    fill the first ``k`` cells (the most out-of-place pattern).
    """
    if not 0 <= k <= n:
        raise ContractError(f"need 0 <= k <= n, got k={k}, n={n}")
    keys = [1] * k + [0] * (n - k)
    if rng is not None:
        for i in range(n - 1, 0, -1):
            j = uniform_in_range(rng, 0, i)
            keys[i], keys[j] = keys[j], keys[i]
    return tag(keys)


class SpinPhase(Enum):
    PHASE1 = 1
    PHASE2 = 2
    PHASE3 = 3


def spin_phase_of(inversions: int, n: int) -> SpinPhase:
    if inversions < 0 or n < 2:
        raise ContractError(f"need inversions >= 0 and n >= 2, got {inversions}, {n}")
    if inversions >= 12 * n * math.log2(n):
        return SpinPhase.PHASE1
    if inversions >= 12 * n:
        return SpinPhase.PHASE2
    return SpinPhase.PHASE3


class RegionKind(Enum):
    LOW = "low"
    HIGH = "high"
    MIXED = "mixed"


@dataclass(frozen=True)
class Region:
    start: int  # 1-based, inclusive
    stop: int   # 1-based, inclusive
    kind: RegionKind
    distance: int  # regions to the crossover or mixed region; 0 for mixed
    dirtiness: int
    desired_bound: int

    @property
    def size(self) -> int:
        return self.stop - self.start + 1


@dataclass(frozen=True)
class RegionReport:
    depth: int | None  # None for leaf level
    ones: int
    regions: tuple[Region, ...]

    @property
    def total_dirtiness(self) -> int:
        return sum(r.dirtiness for r in self.regions if r.kind is not RegionKind.MIXED)


def desired_dirtiness(n: int, d: int, j: int, region_size: int) -> int:
    """Target dirtiness for a region ``j`` regions from the crossover at depth ``d``."""
    if d < 0 or j < 0:
        raise ContractError(f"need d >= 0 and j >= 0, got d={d}, j={j}")
    if j == 0:
        return region_size
    if j == 1:
        return n // (5 * 2**d)
    return n // 2 ** (d + j + 3)


def _as_bits(array01: Sequence) -> list[int]:
    bits = [e.key if isinstance(e, TaggedElement) else e for e in array01]
    if any(b not in (0, 1) for b in bits):
        raise ContractError("region diagnostics need 0-1 keys")
    return [int(b) for b in bits]


def _classify(bits: list[int], bounds: list[tuple[int, int]], depth: int | None) -> RegionReport:
    n = len(bits)
    k = sum(bits)
    cross = n - k  # cells [0, cross) should hold zeroes
    kinds = []
    for a, b in bounds:
        if b <= cross:
            kinds.append(RegionKind.LOW)
        elif a >= cross:
            kinds.append(RegionKind.HIGH)
        else:
            kinds.append(RegionKind.MIXED)
    # index of the first region at or right of the crossover
    pivot = next((i for i, (a, _) in enumerate(bounds) if a >= cross or kinds[i] is RegionKind.MIXED),
                 len(bounds))
    mixed = pivot < len(bounds) and kinds[pivot] is RegionKind.MIXED
    level = depth if depth is not None else max(0, math.ceil(math.log2(n))) if n else 0
    regions = []
    for i, ((a, b), kind) in enumerate(zip(bounds, kinds)):
        size = b - a
        if kind is RegionKind.MIXED:
            j, dirt = 0, size
        elif kind is RegionKind.LOW:
            j, dirt = pivot - i, sum(bits[a:b])
        else:
            j = i - pivot if mixed else i - pivot + 1
            dirt = size - sum(bits[a:b])
        regions.append(Region(a + 1, b, kind, j, dirt, desired_dirtiness(n, level, j, size)))
    return RegionReport(depth, k, tuple(regions))


def region_report(array01: Sequence, depth: int) -> RegionReport:
    """Split into ``2**depth`` contiguous regions and classify each against the crossover."""
    bits = _as_bits(array01)
    n = len(bits)
    if depth < 0 or 2**depth > n:
        raise ContractError(f"need 0 <= depth and 2**depth <= n, got depth={depth}, n={n}")
    m = 2**depth
    cuts = [i * n // m for i in range(m + 1)]
    return _classify(bits, list(zip(cuts, cuts[1:])), depth)


def leaf_report(array01: Sequence) -> RegionReport:
    """Region report with one cell per region (no region is ever mixed)."""
    bits = _as_bits(array01)
    return _classify(bits, [(i, i + 1) for i in range(len(bits))], None)


def leaf_dirtiness(array01: Sequence) -> int:
    """Number of cells holding the wrong bit for their side of the crossover."""
    bits = _as_bits(array01)
    cross = len(bits) - sum(bits)
    return sum(bits[:cross]) + (len(bits) - cross - sum(bits[cross:]))
