"""Compiled inner loops for registers that fit in a machine word (n <= 62)."""

import numpy as np
from numba import njit

WORD_CAP = 62


@njit(cache=True)
def _parity(x):
    x ^= x >> 32
    x ^= x >> 16
    x ^= x >> 8
    x ^= x >> 4
    x ^= x >> 2
    x ^= x >> 1
    return x & 1


@njit(cache=True)
def _feedback(s, tapmask, jumps):
    fb = _parity(s & tapmask)
    suffix = s >> 1
    if jumps.size:
        k = np.searchsorted(jumps, suffix)
        if k < jumps.size and jumps[k] == suffix:
            fb ^= 1
    return fb


@njit(cache=True)
def period_kernel(seed, n, tapmask, jumps, budget):
    """Steps until the state returns to ``seed``; -1 if ``budget`` runs out."""
    top = n - 1
    s = seed
    t = 0
    while True:
        s = (s >> 1) | (_feedback(s, tapmask, jumps) << top)
        t += 1
        if s == seed:
            return t
        if t >= budget:
            return -1


@njit(cache=True)
def generate_kernel(seed, n, tapmask, jumps, count):
    out = np.empty(count, dtype=np.uint8)
    top = n - 1
    s = seed
    for t in range(count):
        out[t] = s & 1
        s = (s >> 1) | (_feedback(s, tapmask, jumps) << top)
    return out


def as_jump_array(jumps) -> np.ndarray:
    return np.array(sorted(jumps), dtype=np.int64)
