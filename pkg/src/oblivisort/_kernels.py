"""Compiled inner loops.

The sorts operate on an int64 array of ranks (position of each element in the
``(key, origin)`` order), which makes comparisons identical to the tagged
comparisons.  Generator state travels as a uint64 array
``[state, inc, position]`` and must produce the same draws as
:class:`oblivisort.core.RngStream`.  Trace buffers hold 1-based
``(low, high)`` cell pairs.
"""

import numpy as np
from numba import njit

_MULT = np.uint64(6364136223846793005)
_M32 = np.uint64(0xFFFFFFFF)
_TWO32 = np.uint64(1 << 32)
_ONE = np.uint64(1)
_S18 = np.uint64(18)
_S27 = np.uint64(27)
_S59 = np.uint64(59)
_R31 = np.uint64(31)
_R32 = np.uint64(32)


@njit(cache=True)
def next_u32(st):
    old = st[0]
    st[0] = old * _MULT + st[1]
    st[2] += _ONE
    x = (((old >> _S18) ^ old) >> _S27) & _M32
    rot = old >> _S59
    return ((x >> rot) | (x << ((_R32 - rot) & _R31))) & _M32


@njit(cache=True)
def bounded(st, bound):
    """Uniform integer in [0, bound); bound 1 consumes no draw."""
    if bound == 1:
        return 0
    b = np.uint64(bound)
    threshold = (_TWO32 - b) % b
    while True:
        r = next_u32(st)
        if r >= threshold:
            return np.int64(r % b)


@njit(cache=True)
def _gate(a, lo, hi):
    # lo < hi, 0-based
    if a[lo] > a[hi]:
        t = a[lo]
        a[lo] = a[hi]
        a[hi] = t
        return 1
    return 0


@njit(cache=True)
def spin_round(a, st, buf, pos):
    """One Spin-the-bottle round; returns (swaps, new trace position)."""
    n = a.shape[0]
    record = buf.shape[0] > 0
    swaps = 0
    for i in range(1, n + 1):
        u = 1 + bounded(st, n - 1)
        s = u + 1 if u >= i else u
        lo = min(i, s)
        hi = max(i, s)
        swaps += _gate(a, lo - 1, hi - 1)
        if record:
            buf[pos, 0] = lo
            buf[pos, 1] = hi
            pos += 1
    return swaps, pos


@njit(cache=True)
def annealing_pass(a, temp, reps, st, buf, pos):
    """Up-pass then down-pass at temperature ``temp`` with ``reps`` draws per cell."""
    n = a.shape[0]
    record = buf.shape[0] > 0
    swaps = 0
    for i in range(1, n):
        top = min(n, i + temp)
        for _ in range(reps):
            s = i + 1 + bounded(st, top - i)
            swaps += _gate(a, i - 1, s - 1)
            if record:
                buf[pos, 0] = i
                buf[pos, 1] = s
                pos += 1
    for i in range(n, 1, -1):
        bottom = max(1, i - temp)
        for _ in range(reps):
            s = bottom + bounded(st, i - bottom)
            swaps += _gate(a, s - 1, i - 1)
            if record:
                buf[pos, 0] = s
                buf[pos, 1] = i
                pos += 1
    return swaps, pos


@njit(cache=True)
def guess_draws(a, count, st, buf, pos):
    """``count`` compare-exchanges on uniformly random unordered pairs."""
    n = a.shape[0]
    record = buf.shape[0] > 0
    swaps = 0
    for _ in range(count):
        i = 1 + bounded(st, n)
        u = 1 + bounded(st, n - 1)
        s = u + 1 if u >= i else u
        lo = min(i, s)
        hi = max(i, s)
        swaps += _gate(a, lo - 1, hi - 1)
        if record:
            buf[pos, 0] = lo
            buf[pos, 1] = hi
            pos += 1
    return swaps, pos


@njit(cache=True)
def is_sorted(a):
    for i in range(a.shape[0] - 1):
        if a[i] > a[i + 1]:
            return False
    return True


@njit(cache=True)
def replay(ops, a):
    swaps = 0
    for t in range(ops.shape[0]):
        swaps += _gate(a, ops[t, 0] - 1, ops[t, 1] - 1)
    return swaps


@njit(cache=True)
def bubble_pass(a):
    swaps = 0
    for i in range(a.shape[0] - 1):
        swaps += _gate(a, i, i + 1)
    return swaps
