"""Element model, seeded randomness and the compare-exchange gate.

Every algorithm in the package draws its random choices from an
:class:`RngStream` (PCG-XSH-RR 64/32) so that traces are reproducible
bit-for-bit from ``(seed, stream)``.  Indices in the public API are 1-based.
"""

from __future__ import annotations

from typing import Iterable, MutableSequence, NamedTuple, Sequence

MASK32 = 0xFFFF_FFFF
MASK64 = 0xFFFF_FFFF_FFFF_FFFF
PCG_MULTIPLIER = 6364136223846793005


class ContractError(ValueError):
    """A precondition of a public operation was violated."""


class TaggedElement(NamedTuple):
    """A key paired with its 1-based original position.

    Tuple ordering gives the lexicographic ``(key, origin)`` order, so equal
    keys are still totally ordered.
    """

    key: object
    origin: int


def tag(keys: Iterable) -> list[TaggedElement]:
    """Attach origins ``1..n`` to ``keys``."""
    return [TaggedElement(k, i) for i, k in enumerate(keys, start=1)]


def keys_of(array: Iterable[TaggedElement]) -> list:
    return [e.key for e in array]


def is_sorted(array: Sequence) -> bool:
    return all(a <= b for a, b in zip(array, array[1:]))


def splitmix64(x: int) -> int:
    x = (x + 0x9E37_79B9_7F4A_7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58_476D_1CE4_E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D0_49BB_1331_11EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, *ids: int) -> int:
    """Deterministically mix ``seed`` with trial identifiers into a new 64-bit seed."""
    h = splitmix64(seed & MASK64)
    for i in ids:
        h = splitmix64(h ^ (i & MASK64))
    return h


class RngStream:
    """PCG32 (XSH-RR) generator with explicit seed and stream selector.

    Distinct ``stream`` values select distinct LCG increments, so streams of
    one seed never share a draw sequence.  ``position`` counts 32-bit outputs.
    """

    def __init__(self, seed: int, stream: int = 0):
        if not 0 <= seed <= MASK64:
            raise ContractError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.stream = stream
        self.inc = ((stream << 1) | 1) & MASK64
        self.state = 0
        self.position = 0
        self._step()
        self.state = (self.state + seed) & MASK64
        self._step()

    def _step(self) -> None:
        self.state = (self.state * PCG_MULTIPLIER + self.inc) & MASK64

    def next_u32(self) -> int:
        old = self.state
        self._step()
        self.position += 1
        xorshifted = (((old >> 18) ^ old) >> 27) & MASK32
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & MASK32

    def next_u64(self) -> int:
        return (self.next_u32() << 32) | self.next_u32()

    def uniform_in_range(self, lo: int, hi: int) -> int:
        return uniform_in_range(self, lo, hi)

    def getstate(self) -> tuple[int, int, int]:
        return self.state, self.inc, self.position

    def setstate(self, state: tuple[int, int, int]) -> None:
        self.state, self.inc, self.position = state

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream={self.stream}, position={self.position})"


def uniform_in_range(rng: RngStream, lo: int, hi: int) -> int:
    """Return an integer uniform on ``[lo, hi]`` by rejection sampling.

    A single-point range returns ``lo`` without consuming a draw.
    """
    if lo > hi:
        raise ContractError(f"empty range [{lo}, {hi}]")
    bound = hi - lo + 1
    if bound == 1:
        return lo
    if bound <= 1 << 32:
        threshold = (-bound & MASK32) % bound
        while True:
            r = rng.next_u32()
            if r >= threshold:
                return lo + r % bound
    if bound > 1 << 64:
        raise ContractError(f"range [{lo}, {hi}] wider than 2**64")
    threshold = (-bound & MASK64) % bound
    while True:
        r = rng.next_u64()
        if r >= threshold:
            return lo + r % bound


def compare_exchange(array: MutableSequence, i: int, j: int) -> bool:
    """Order cells ``i`` and ``j`` (1-based) so the lower index holds the smaller element.

    Returns whether a swap happened.
    """
    n = len(array)
    if i == j:
        raise ContractError(f"compare_exchange needs distinct cells, got {i} twice")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ContractError(f"cell index out of range 1..{n}: ({i}, {j})")
    if i > j:
        i, j = j, i
    a, b = array[i - 1], array[j - 1]
    if b < a:
        array[i - 1], array[j - 1] = b, a
        return True
    return False
