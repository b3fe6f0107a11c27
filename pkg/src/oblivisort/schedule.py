"""Annealing schedules: construction, validation, cost and file format.

A schedule is a sequence of ``(temperature, repetitions)`` entries with
nonincreasing temperatures, closed by the terminator ``(0, 0)``.  All
logarithms here are base 2.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .core import ContractError

TERMINATOR = (0, 0)

# Frozen by the calibration sweep at n in {256, 1024} (see README).
PRACTICAL_C_REP = 3
PRACTICAL_TAIL_ROUNDS = 0

# Region-size constant from the Phase-2 analysis; informational, distinct from ``g``.
ANALYSIS_REGION_CONSTANT = 64 * math.e**2


@dataclass(frozen=True)
class AnnealingSchedule:
    entries: tuple[tuple[int, int], ...]
    provenance: str = "custom"

    @property
    def temperatures(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.entries)

    @property
    def repetitions(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.entries)

    def active(self) -> list[tuple[int, int]]:
        """Entries that perform work (temperature at least 1)."""
        return [(t, r) for t, r in self.entries if t >= 1]

    def total_repetitions(self) -> int:
        return sum(r for _, r in self.active())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ScheduleParams:
    """Constants of the three-phase schedule.

    q: Phase-1 floor multiplier on log^6 n.  c: Phase-1 repetitions.
    g: Phase-2 end multiplier on log n and Phase-3 length.  h: Phase-2
    repetition scale for h log n / log log n.
    """

    q: float = 1.0
    c: float = 10.0
    g: float = 1.0
    h: float = 1.0

    def __post_init__(self):
        if self.q < 1 or self.c <= 1 or self.g < 1 or self.h < 1:
            raise ContractError(f"need q >= 1, c > 1, g >= 1, h >= 1; got {self}")


def validate(schedule: AnnealingSchedule) -> str | None:
    """Return the first violation found, or None when the schedule is valid."""
    entries = schedule.entries
    if not entries or tuple(entries[-1]) != TERMINATOR:
        return "missing terminator: last entry must be (0, 0)"
    for pos, (t, r) in enumerate(entries[:-1], start=1):
        if t < 1 or r < 1:
            return f"entry {pos} ({t}, {r}): temperature and repetitions must be >= 1"
    for pos in range(len(entries) - 1):
        if entries[pos][0] < entries[pos + 1][0]:
            return (f"non-monotone temperatures: entry {pos + 1} has T={entries[pos][0]} "
                    f"< T={entries[pos + 1][0]} at entry {pos + 2}")
    return None


def check(schedule: AnnealingSchedule) -> AnnealingSchedule:
    problem = validate(schedule)
    if problem:
        raise ContractError(f"invalid schedule: {problem}")
    return schedule


def schedule_cost(schedule: AnnealingSchedule, n: int) -> int:
    """Exact compare-exchange count of annealing sort on ``n`` cells."""
    if n < 2:
        return 0
    return 2 * (n - 1) * schedule.total_repetitions()


def _halvings(start: int):
    v = start
    while True:
        yield v
        v = -(-v // 2)


def theoretical_schedule(n: int, params: ScheduleParams | None = None) -> AnnealingSchedule:
    """The three-phase schedule with the asymptotic constants left as parameters."""
    if n < 2:
        raise ContractError(f"theoretical schedule needs n >= 2, got {n}")
    p = params or ScheduleParams()
    lg = math.log2(n)
    floor_temp = p.q * lg**6
    entries: list[tuple[int, int]] = []

    if floor_temp < 2 * n:
        reps1 = math.ceil(p.c)
        last = 2 * n
        for t in _halvings(2 * n):
            if t <= floor_temp:
                break
            entries += [(t, reps1), (t, reps1)]
            last = t
        cf = math.ceil(floor_temp)
        if cf < last:
            entries += [(cf, reps1), (cf, reps1)]

        reps2 = max(1, math.ceil(p.h * lg / max(1.0, math.log2(lg))))
        end = p.g * lg
        m = 0
        while True:
            t = math.ceil(floor_temp / 2**m)
            entries.append((t, reps2))
            if t <= end:
                break
            m += 1

    entries += [(1, 1)] * math.ceil(p.g * lg)
    entries.append(TERMINATOR)
    return AnnealingSchedule(tuple(entries), "theoretical")


def practical_schedule(n: int, c_rep: int = PRACTICAL_C_REP,
                       tail_rounds: int = PRACTICAL_TAIL_ROUNDS) -> AnnealingSchedule:
    """Halving temperatures n, n/2, ..., 2 then at least ceil(log n) bubble passes."""
    if n < 2:
        raise ContractError(f"practical schedule needs n >= 2, got {n}")
    if c_rep < 1 or tail_rounds < 0:
        raise ContractError(f"need c_rep >= 1 and tail_rounds >= 0, got {c_rep}, {tail_rounds}")
    entries = []
    for t in _halvings(n):
        if t < 2:
            break
        entries.append((t, c_rep))
    entries += [(1, 1)] * max(tail_rounds, math.ceil(math.log2(n)))
    entries.append(TERMINATOR)
    return AnnealingSchedule(tuple(entries), "practical")


def terminator_only() -> AnnealingSchedule:
    return AnnealingSchedule((TERMINATOR,), "custom")


def parse_schedule(text: str) -> AnnealingSchedule:
    """Parse ``T r`` lines (``#`` starts a comment) and validate the result."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ContractError(f"schedule line {lineno}: expected 'T r', got {raw!r}")
        try:
            t, r = int(parts[0]), int(parts[1])
        except ValueError:
            raise ContractError(f"schedule line {lineno}: non-integer entry {raw!r}") from None
        entries.append((t, r))
    return check(AnnealingSchedule(tuple(entries), "custom"))


def format_schedule(schedule: AnnealingSchedule) -> str:
    lines = [f"# annealing schedule ({schedule.provenance})"]
    lines += [f"{t} {r}" for t, r in schedule.entries]
    return "\n".join(lines) + "\n"


def read_schedule(path: str | os.PathLike) -> AnnealingSchedule:
    with open(path) as fh:
        return parse_schedule(fh.read())


def write_schedule(schedule: AnnealingSchedule, path: str | os.PathLike) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_schedule(schedule))
