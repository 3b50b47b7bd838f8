"""Arithmetic in GF(2^n) and Zech logarithms.

Field elements are plain Python ints: bit ``k`` holds the coefficient of
``x^k`` in the polynomial basis, so the root ``a`` of the defining polynomial
is the int ``2`` and the constant ``1`` is the int ``1``.  Exponents and the
group order are unbounded ints, which keeps ``2^127 - 1`` exact.
"""

from __future__ import annotations

import random
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    CacheFormatError,
    CapExceeded,
    InvalidInput,
    MissingAssertion,
    NotPrimitive,
    OutOfDomain,
    Underivable,
)

DEGREE_CAP = 512
VERIFY_CAP = 24
TABLE_CAP = 24
# Hard limit of the vectorised power table: products of two elements must fit in uint64.
_TABLE_HARD_CAP = 31


# ---------- polynomials


@dataclass(frozen=True)
class Polynomial:
    """Binary polynomial given by its nonzero exponents, highest first."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if len(exps) < 2:
            raise InvalidInput(f"polynomial needs at least two terms: {exps}")
        if any(a <= b for a, b in zip(exps, exps[1:])):
            raise InvalidInput(f"exponents must be strictly decreasing: {exps}")
        if exps[-1] != 0:
            raise InvalidInput("constant term missing")
        if exps[0] < 2:
            raise InvalidInput("degree must be at least 2")
        if exps[0] > DEGREE_CAP:
            raise CapExceeded(f"degree {exps[0]} above cap {DEGREE_CAP}")

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """Accept ``"x^31+x^3+1"`` or the exponent list ``"31,3,0"``."""
        s = text.replace(" ", "")
        if not s:
            raise InvalidInput("empty polynomial")
        if re.fullmatch(r"\d+(,\d+)*", s):
            return cls(tuple(int(t) for t in s.split(",")))
        exps = []
        for term in s.split("+"):
            m = re.fullmatch(r"x(?:\^(\d+)|\*\*(\d+))?|1", term)
            if m is None:
                raise InvalidInput(f"cannot parse term {term!r} in {text!r}")
            if term == "1":
                exps.append(0)
            else:
                exps.append(int(m.group(1) or m.group(2) or 1))
        if len(set(exps)) != len(exps):
            raise InvalidInput(f"repeated term in {text!r}")
        return cls(tuple(sorted(exps, reverse=True)))

    @property
    def degree(self) -> int:
        return self.exponents[0]

    @property
    def mask(self) -> int:
        """The polynomial as a bit vector, including the leading term."""
        m = 0
        for e in self.exponents:
            m |= 1 << e
        return m

    @property
    def is_trinomial(self) -> bool:
        return len(self.exponents) == 3

    def __str__(self) -> str:
        terms = []
        for e in self.exponents:
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return "+".join(terms)


def as_polynomial(p: "Polynomial | str | Iterable[int]") -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, str):
        return Polynomial.parse(p)
    return Polynomial(tuple(p))


# Known primitive polynomials, one or more per degree.
REGISTRY: dict[int, tuple[Polynomial, ...]] = {
    n: tuple(Polynomial.parse(s) for s in polys)
    for n, polys in {
        2: ["x^2+x+1"],
        3: ["x^3+x+1"],
        4: ["x^4+x+1"],
        5: ["x^5+x^2+1"],
        6: ["x^6+x+1"],
        7: ["x^7+x+1", "x^7+x^3+1"],
        8: ["x^8+x^4+x^3+x^2+1"],
        9: ["x^9+x^4+1"],
        10: ["x^10+x^3+1"],
        11: ["x^11+x^2+1"],
        12: ["x^12+x^6+x^4+x+1"],
        13: ["x^13+x^4+x^3+x+1"],
        14: ["x^14+x^10+x^6+x+1"],
        15: ["x^15+x+1"],
        16: ["x^16+x^12+x^3+x+1"],
        17: ["x^17+x^3+1"],
        18: ["x^18+x^7+1"],
        19: ["x^19+x^5+x^2+x+1"],
        20: ["x^20+x^3+1"],
        21: ["x^21+x^2+1"],
        22: ["x^22+x+1"],
        23: ["x^23+x^5+1"],
        24: ["x^24+x^7+x^2+x+1"],
        31: ["x^31+x^3+1"],
        127: ["x^127+x+1"],
    }.items()
}


def registry_poly(n: int) -> Polynomial:
    """First registry entry of degree ``n``."""
    try:
        return REGISTRY[n][0]
    except KeyError:
        raise InvalidInput(f"no registry polynomial of degree {n}") from None


def in_registry(poly: Polynomial) -> bool:
    return poly in REGISTRY.get(poly.degree, ())


# ---------- field context


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class FieldCtx:
    poly: Polynomial
    status: str = "verified"
    n: int = field(init=False)
    order: int = field(init=False)
    _mask: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.status not in ("verified", "asserted"):
            raise InvalidInput(f"bad primitivity status {self.status!r}")
        object.__setattr__(self, "n", self.poly.degree)
        object.__setattr__(self, "order", (1 << self.poly.degree) - 1)
        object.__setattr__(self, "_mask", self.poly.mask)

    @property
    def root(self) -> int:
        """The element ``a`` (a root of ``poly``)."""
        return 2

    def reduce(self, u: int) -> int:
        n, m = self.n, self._mask
        top = u.bit_length() - 1
        while top >= n:
            u ^= m << (top - n)
            top = u.bit_length() - 1
        return u

    def mul_root(self, u: int) -> int:
        """``u * a``, the one-step shift used by the power walk."""
        u <<= 1
        if u >> self.n:
            u ^= self._mask
        return u

    def mul(self, u: int, v: int) -> int:
        if u.bit_length() < v.bit_length():
            u, v = v, u
        acc = 0
        k = 0
        while v:
            if v & 1:
                acc ^= u << k
            v >>= 1
            k += 1
        return self.reduce(acc)

    def pow(self, u: int, e: int) -> int:
        if e < 0:
            raise InvalidInput("negative exponent")
        if u == 0:
            return 1 if e == 0 else 0
        return self.pow_unreduced(u, e % self.order)

    def pow_unreduced(self, u: int, e: int) -> int:
        """Square-and-multiply without reducing ``e``; valid before primitivity is known."""
        result = 1
        base = u
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def power_of_root(self, e: int) -> int:
        return self.pow(2, e)

    def coefficients(self, u: int) -> tuple[int, ...]:
        """Bit vector of length n, index k = coefficient of x^k."""
        return tuple((u >> k) & 1 for k in range(self.n))


def root_order_is_full(ctx: FieldCtx) -> bool:
    """True iff the multiplicative order of ``a`` is exactly ``2^n - 1``."""
    N = ctx.order
    if ctx.pow_unreduced(2, N) != 1:
        return False
    return all(ctx.pow_unreduced(2, N // p) != 1 for p in _prime_factors(N))


def field_new(
    poly: "Polynomial | str | Iterable[int]",
    assume_primitive: bool = False,
    verify_cap: int = VERIFY_CAP,
) -> FieldCtx:
    poly = as_polynomial(poly)
    n = poly.degree
    if n <= verify_cap:
        ctx = FieldCtx(poly, "verified")
        if not root_order_is_full(ctx):
            raise NotPrimitive(f"{poly} is not primitive")
        return ctx
    if in_registry(poly):
        return FieldCtx(poly, "verified")
    if assume_primitive:
        return FieldCtx(poly, "asserted")
    raise MissingAssertion(
        f"{poly}: degree {n} too large to verify and not in the registry; "
        "pass assume_primitive to proceed"
    )


# ---------- power table


def _mul_const_vec(arr: np.ndarray, c: int, ctx: FieldCtx) -> np.ndarray:
    """Multiply every element of a uint64 array by the field constant ``c``."""
    acc = np.zeros_like(arr)
    k = 0
    while c:
        if c & 1:
            acc ^= arr << np.uint64(k)
        c >>= 1
        k += 1
    n = ctx.n
    for top in range(2 * n - 2, n - 1, -1):
        hit = (acc >> np.uint64(top)) & np.uint64(1)
        acc ^= hit * np.uint64(ctx._mask << (top - n))
    return acc


def power_table(ctx: FieldCtx, cap: int = TABLE_CAP) -> np.ndarray:
    """All powers ``a^0 .. a^(2^n - 2)`` as a uint32 array.

    Built by repeated doubling: the block ``a^L .. a^(2L-1)`` is the block
    ``a^0 .. a^(L-1)`` multiplied by ``a^L``.
    """
    n = ctx.n
    if n > min(cap, _TABLE_HARD_CAP):
        raise CapExceeded(f"power table for n={n} exceeds cap {min(cap, _TABLE_HARD_CAP)}")
    N = ctx.order
    out = np.empty(N, dtype=np.uint32)
    seed = [1]
    while len(seed) < min(N, 64):
        seed.append(ctx.mul_root(seed[-1]))
    filled = len(seed)
    out[:filled] = seed
    chunk = 1 << 20
    while filled < N:
        shift = ctx.power_of_root(filled)
        take = min(filled, N - filled)
        for lo in range(0, take, chunk):
            hi = min(lo + chunk, take)
            block = out[lo:hi].astype(np.uint64)
            out[filled + lo : filled + hi] = _mul_const_vec(block, shift, ctx)
        filled += take
    return out


# ---------- Zech logarithms


@dataclass(frozen=True, eq=False)
class ZechTable:
    """Map ``j -> Z(j)`` with ``1 + a^j = a^Z(j)``.

    ``kind == "full"`` stores a dense uint32 array indexed by ``j - 1``;
    ``kind == "partial"`` stores a dict of the derivable entries only.
    """

    n: int
    kind: str
    entries: "np.ndarray | Mapping[int, int]"
    poly: Polynomial | None = None

    @property
    def order(self) -> int:
        return (1 << self.n) - 1

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, j: int) -> int:
        j = int(j)
        if not 1 <= j <= self.order - 1:
            raise OutOfDomain(f"Zech logarithm undefined at j={j} (domain 1..2^{self.n}-2)")
        if self.kind == "full":
            return int(self.entries[j - 1])
        try:
            return self.entries[j]
        except KeyError:
            raise Underivable(
                f"Z({j}) is not reachable from the trinomial identity by doubling; "
                "a discrete logarithm would be required"
            ) from None

    __getitem__ = lookup

    def __contains__(self, j: int) -> bool:
        if self.kind == "full":
            return 1 <= j <= self.order - 1
        return j in self.entries

    def items(self):
        if self.kind == "full":
            return ((j + 1, int(z)) for j, z in enumerate(self.entries))
        return iter(sorted(self.entries.items()))


def zech_build_table(ctx: FieldCtx, cap: int = TABLE_CAP) -> ZechTable:
    powers = power_table(ctx, cap)
    # inverse[a^j ^ 1] = j, so inverse[a^m] = Z(m).
    inverse = np.empty(1 << ctx.n, dtype=np.uint32)
    inverse[powers ^ np.uint32(1)] = np.arange(ctx.order, dtype=np.uint32)
    entries = inverse[powers[1:]]
    return ZechTable(ctx.n, "full", entries, ctx.poly)


def zech_trinomial(ctx: FieldCtx) -> ZechTable:
    """Partial table for ``x^n + x^k + 1`` from ``Z(k) = n`` alone.

    Closed under doubling ``Z(2j) = 2 Z(j)`` and the involution; no other
    entries are derivable without a discrete logarithm.
    """
    poly = ctx.poly
    if not poly.is_trinomial:
        raise InvalidInput(f"{poly} is not a trinomial")
    n, k = poly.exponents[0], poly.exponents[1]
    N = ctx.order
    entries: dict[int, int] = {}
    u, v = k, n % N
    for _ in range(n):
        entries[u] = v
        entries[v] = u
        u, v = (2 * u) % N, (2 * v) % N
    return ZechTable(n, "partial", entries, poly)


def zech_backend(ctx: FieldCtx, cap: int = TABLE_CAP) -> ZechTable:
    """Full table when it fits under ``cap``, else the trinomial closure."""
    if ctx.n <= min(cap, _TABLE_HARD_CAP):
        return zech_build_table(ctx, cap)
    if ctx.poly.is_trinomial:
        return zech_trinomial(ctx)
    raise CapExceeded(
        f"n={ctx.n} exceeds the table cap and {ctx.poly} is not a trinomial"
    )


def zech_lookup(table: ZechTable, j: int) -> int:
    return table.lookup(j)


# ---------- cache file

_MAGIC = b"ZECH"
_VERSION = 1


def save_table(table: ZechTable, path: "str | Path") -> None:
    if table.kind != "full" or table.poly is None:
        raise InvalidInput("only full tables with a known polynomial can be cached")
    exps = table.poly.exponents
    header = _MAGIC + struct.pack("<HHH", _VERSION, table.n, len(exps))
    header += struct.pack(f"<{len(exps)}I", *exps)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.asarray(table.entries, dtype="<u4").tobytes())


def load_table(path: "str | Path", checks: int = 100) -> ZechTable:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise CacheFormatError(f"{path}: bad magic {data[:4]!r}")
    if len(data) < 10:
        raise CacheFormatError(f"{path}: truncated header")
    version, n, count = struct.unpack_from("<HHH", data, 4)
    if version != _VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    off = 10 + 4 * count
    exps = struct.unpack_from(f"<{count}I", data, 10)
    poly = Polynomial(exps)
    if poly.degree != n:
        raise CacheFormatError(f"{path}: degree {poly.degree} does not match n={n}")
    size = (1 << n) - 2
    entries = np.frombuffer(data, dtype="<u4", offset=off)
    if entries.size != size:
        raise CacheFormatError(f"{path}: expected {size} entries, found {entries.size}")
    entries = entries.astype(np.uint32)
    table = ZechTable(n, "full", entries, poly)
    rng = random.Random(n)
    for _ in range(min(checks, size)):
        j = rng.randint(1, size)
        z = int(entries[j - 1])
        if not 1 <= z <= size or int(entries[z - 1]) != j or z == j:
            raise CacheFormatError(f"{path}: involution fails at j={j}")
    return table
