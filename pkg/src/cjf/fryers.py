"""Exact distance spectrum of de Bruijn feedback functions around a linear one.

With ``M = 2^(n-1)`` the generating function is

    G(y) = ((1 + y)^M - (1 - y)^M) / 2^n,

so the coefficient of ``y^k`` is ``C(M, k) / M`` for odd ``k`` and 0 otherwise.
Everything is computed with Python ints.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from math import comb, factorial

from .errors import CapExceeded, InvalidInput

SPECTRUM_CAP = 64
# Tables up to this order are small enough to hold fully in memory.
MATERIALIZE_CAP = 12


def _check_order(n: int, cap: int = SPECTRUM_CAP) -> int:
    if n < 2:
        raise InvalidInput("order must be at least 2")
    if n > cap:
        raise CapExceeded(f"order {n} above spectrum cap {cap}")
    return 1 << (n - 1)


def iter_counts(n: int) -> Iterator[tuple[int, int]]:
    """Yield ``(k, N(l;k))`` for odd ``k`` using the ratio of consecutive binomials."""
    M = _check_order(n)
    c = M  # C(M, 1)
    k = 1
    while k < M:
        yield k, c // M
        c = c * (M - k) * (M - k - 1) // ((k + 1) * (k + 2))
        k += 2


def count(n: int, k: int) -> int:
    """A single coefficient N(l;k)."""
    M = _check_order(n)
    if k < 1 or k % 2 == 0 or k >= M:
        return 0
    return comb(M, k) // M


def falling_factorial_count(n: int, k: int) -> int:
    """``(M-1)(M-2)...(M-k+1) / k!`` with ``M = 2^(n-1)``."""
    M = _check_order(n)
    num = 1
    for r in range(1, k):
        num *= M - r
    q, rem = divmod(num, factorial(k))
    if rem:
        raise ArithmeticError(f"non-integral falling factorial at n={n}, k={k}")
    return q


class SpectrumTable(Mapping):
    """Read-only map ``k -> N(l;k)`` over odd ``k`` in ``1 .. 2^(n-1) - 1``.

    Small orders are held in a dict; larger ones compute entries on demand.
    """

    def __init__(self, n: int):
        self.n = n
        self.half = _check_order(n)
        self._counts = dict(iter_counts(n)) if n <= MATERIALIZE_CAP else None

    def __getitem__(self, k: int) -> int:
        if not isinstance(k, int) or k < 1 or k % 2 == 0 or k >= self.half:
            raise KeyError(k)
        if self._counts is not None:
            return self._counts[k]
        return count(self.n, k)

    def __iter__(self):
        return iter(range(1, self.half, 2))

    def __len__(self) -> int:
        return self.half // 2

    def items(self):
        if self._counts is not None:
            return self._counts.items()
        return iter_counts(self.n)

    def as_dict(self) -> dict[int, int]:
        if self._counts is None:
            raise CapExceeded(f"order {self.n} spectrum too large to materialise")
        return dict(self._counts)

    def __repr__(self) -> str:
        return f"SpectrumTable(n={self.n})"


def fryers_spectrum(n: int) -> SpectrumTable:
    return SpectrumTable(n)


def helleseth_klove(n: int) -> int:
    """Number of cross-join pairs in an m-sequence of order n."""
    if n < 2:
        raise InvalidInput("order must be at least 2")
    M = 1 << (n - 1)
    return (M - 1) * (M - 2) // 6


def generating_function_at_one(n: int) -> int:
    """``G(1) = (2^M - 0^M) / 2^n``, exactly."""
    M = _check_order(n)
    return (1 << M) >> n


def spectrum_sum(n: int, explicit_cap: int = 16) -> int:
    """Sum of all N(l;k); summed term by term up to ``explicit_cap``."""
    _check_order(n)
    if n <= explicit_cap:
        return sum(c for _, c in iter_counts(n))
    return generating_function_at_one(n)


def debruijn_count(n: int) -> int:
    """``B_n = 2^(2^(n-1) - n)`` cyclically distinct de Bruijn sequences."""
    if n < 1:
        raise InvalidInput("order must be positive")
    return 1 << ((1 << (n - 1)) - n)
