"""Feedback shift register engine.

A register state ``(x_0, ..., x_{n-1})`` is packed into an int with ``x_k``
at bit ``k``; one step shifts right and inserts the feedback bit at bit
``n - 1``.  The (n-1)-bit suffix ``(x_1, ..., x_{n-1})`` of a state ``s`` is
therefore simply ``s >> 1``, with ``x_1`` as the least significant bit.  Truth
tables of the nonlinear part ``f`` are ints of ``2^(n-1)`` bits indexed by
that suffix value.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import CapExceeded, Inconsistent, InvalidInput, Timeout, Unsupported, WrongLength
from .gf2 import FieldCtx, Polynomial, as_polynomial

STEP_BUDGET = 1 << 32
EXACT_DEGREE_CAP = 20
WINDOW_CAP = 24


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def state_bits(s: int, n: int) -> tuple[int, ...]:
    """Unpack a state int into ``(x_0, ..., x_{n-1})``."""
    return tuple((s >> k) & 1 for k in range(n))


def pack_bits(bits: Iterable[int]) -> int:
    s = 0
    for k, b in enumerate(bits):
        if b not in (0, 1):
            raise InvalidInput(f"bit value {b!r}")
        s |= b << k
    return s


def parse_state(text: str, n: int) -> int:
    """Parse a state written ``x_0 x_1 ... x_{n-1}`` as a 0/1 string."""
    text = text.strip()
    if len(text) != n or set(text) - {"0", "1"}:
        raise InvalidInput(f"state must be {n} characters of 0/1, got {text!r}")
    return pack_bits(int(c) for c in text)


# ---------- feedback functions


@dataclass(frozen=True)
class FeedbackFunction:
    """``F = x_0 + sum(x_k for k in taps \\ {0}) + sum(minterm(u) for u in jumps)``.

    ``minterm(u)`` is 1 exactly when ``(x_1, ..., x_{n-1})`` equals the packed
    suffix ``u``.
    """

    n: int
    linear_taps: frozenset[int]
    jump_suffixes: frozenset[int] = frozenset()
    poly: str | None = None

    def __post_init__(self):
        taps = frozenset(int(k) for k in self.linear_taps)
        jumps = frozenset(int(u) for u in self.jump_suffixes)
        object.__setattr__(self, "linear_taps", taps)
        object.__setattr__(self, "jump_suffixes", jumps)
        if self.n < 2:
            raise InvalidInput("register order must be at least 2")
        if 0 not in taps:
            raise InvalidInput("tap 0 is required for a non-singular register")
        if any(not 0 <= k < self.n for k in taps):
            raise InvalidInput(f"taps out of range for n={self.n}: {sorted(taps)}")
        if any(not 0 <= u < (1 << (self.n - 1)) for u in jumps):
            raise InvalidInput(f"jump suffix out of range for n={self.n}")

    @classmethod
    def linear(cls, poly: "Polynomial | FieldCtx | str") -> "FeedbackFunction":
        """The m-sequence recursion of ``poly``: taps are its exponents below n."""
        if isinstance(poly, FieldCtx):
            poly = poly.poly
        poly = as_polynomial(poly)
        taps = frozenset(e for e in poly.exponents if e < poly.degree)
        return cls(poly.degree, taps, frozenset(), str(poly))

    @classmethod
    def from_table(cls, n: int, table: int, taps: Iterable[int] = (0,), poly: str | None = None):
        """Represent the nonlinear part ``table`` relative to the given linear taps."""
        base = cls(n, frozenset(taps), frozenset(), poly)
        diff = table ^ base.truth_table()
        jumps = frozenset(u for u in range(1 << (n - 1)) if (diff >> u) & 1)
        return cls(n, base.linear_taps, jumps, poly)

    @property
    def tap_mask(self) -> int:
        m = 0
        for k in self.linear_taps:
            m |= 1 << k
        return m

    def with_jumps(self, jumps: Iterable[int]) -> "FeedbackFunction":
        return FeedbackFunction(self.n, self.linear_taps, frozenset(jumps), self.poly)

    def truth_table(self) -> int:
        """Truth table of ``f`` (the part of F without ``x_0``), as an int."""
        if self.n - 1 > WINDOW_CAP:
            raise CapExceeded(f"truth table of 2^{self.n - 1} entries")
        u = np.arange(1 << (self.n - 1), dtype=np.int64)
        lin = u & (self.tap_mask >> 1)
        par = np.zeros_like(u)
        while lin.any():
            par ^= lin & 1
            lin >>= 1
        bits = par.astype(np.uint8)
        for j in self.jump_suffixes:
            bits[j] ^= 1
        return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")

    def to_json(self) -> dict:
        width = max(1, -(-(self.n - 1) // 4))
        return {
            "n": self.n,
            "poly": self.poly,
            "linear_taps": sorted(self.linear_taps),
            "jump_suffixes": [format(u, f"0{width}x") for u in sorted(self.jump_suffixes)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FeedbackFunction":
        try:
            return cls(
                int(obj["n"]),
                frozenset(int(k) for k in obj["linear_taps"]),
                frozenset(int(h, 16) for h in obj.get("jump_suffixes", [])),
                obj.get("poly"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed feedback function JSON: {exc}") from exc


def evaluate(F: FeedbackFunction, s: int) -> int:
    return _parity(s & F.tap_mask) ^ ((s >> 1) in F.jump_suffixes)


def step(F: FeedbackFunction, s: int) -> int:
    return (s >> 1) | (evaluate(F, s) << (F.n - 1))


def step_map(F: FeedbackFunction) -> np.ndarray:
    """The successor of every state, as an array of length 2^n."""
    if F.n > WINDOW_CAP:
        raise CapExceeded(f"step map of 2^{F.n} states")
    s = np.arange(1 << F.n, dtype=np.int64)
    fb = np.zeros_like(s)
    lin = s & F.tap_mask
    while lin.any():
        fb ^= lin & 1
        lin >>= 1
    if F.jump_suffixes:
        fb ^= np.isin(s >> 1, np.fromiter(F.jump_suffixes, dtype=np.int64))
    return (s >> 1) | (fb << (F.n - 1))


# ---------- sequences


@dataclass(frozen=True)
class BitSequence:
    """A finite (cyclic) binary sequence; ``bits`` holds one 0/1 byte per bit."""

    bits: bytes
    order_n: int
    kind: str = "raw"

    def __post_init__(self):
        if self.kind not in ("raw", "modified_debruijn", "debruijn"):
            raise InvalidInput(f"unknown sequence kind {self.kind!r}")

    @classmethod
    def from_string(cls, text: str, n: int, kind: str = "raw") -> "BitSequence":
        text = "".join(text.split())
        if set(text) - {"0", "1"}:
            raise InvalidInput("sequence must contain only 0 and 1")
        return cls(bytes(int(c) for c in text), n, kind)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits.translate(bytes.maketrans(b"\x00\x01", b"01")).decode()

    def array(self) -> np.ndarray:
        return np.frombuffer(self.bits, dtype=np.uint8)

    def window(self, p: int) -> int:
        """The state starting at position ``p`` (cyclic)."""
        L = len(self.bits)
        return pack_bits(self.bits[(p + k) % L] for k in range(self.order_n))

    def windows(self) -> np.ndarray:
        """All cyclic n-windows as packed states; entry ``t`` is the state at ``t``."""
        n = self.order_n
        if n > WINDOW_CAP:
            raise CapExceeded(f"window index of 2^{n} states")
        a = self.array().astype(np.int64)
        w = np.zeros_like(a)
        for k in range(n):
            w |= np.roll(a, -k) << k
        return w

    def rotate(self, p: int) -> "BitSequence":
        p %= max(len(self.bits), 1)
        return BitSequence(self.bits[p:] + self.bits[:p], self.order_n, self.kind)

    def to_packed(self) -> bytes:
        """8-byte little-endian length prefix, then bits packed LSB first."""
        body = np.packbits(self.array(), bitorder="little").tobytes()
        return len(self.bits).to_bytes(8, "little") + body

    @classmethod
    def from_packed(cls, data: bytes, n: int) -> "BitSequence":
        length = int.from_bytes(data[:8], "little")
        bits = np.unpackbits(np.frombuffer(data[8:], dtype=np.uint8), bitorder="little")
        if bits.size < length:
            raise InvalidInput("packed sequence shorter than its length prefix")
        return cls(bits[:length].tobytes(), n)


def generate(F: FeedbackFunction, seed: int, count: int) -> BitSequence:
    if count < 0:
        raise InvalidInput("count must be non-negative")
    if F.n <= _kernels.WORD_CAP:
        bits = _kernels.generate_kernel(
            seed, F.n, F.tap_mask, _kernels.as_jump_array(F.jump_suffixes), count
        )
        return BitSequence(bits.tobytes(), F.n)
    out = bytearray(count)
    s = seed
    for t in range(count):
        out[t] = s & 1
        s = step(F, s)
    return BitSequence(bytes(out), F.n)


def period(F: FeedbackFunction, seed: int, budget: int = STEP_BUDGET) -> int:
    """Least T >= 1 with state_T == seed.

    The step map is a permutation (tap 0 is always present), so every orbit is
    a pure cycle and counting steps back to the seed needs constant memory.
    """
    if F.n <= _kernels.WORD_CAP:
        t = _kernels.period_kernel(
            seed, F.n, F.tap_mask, _kernels.as_jump_array(F.jump_suffixes), budget
        )
        if t < 0:
            raise Timeout(f"no return to seed within {budget} steps")
        return int(t)
    s = step(F, seed)
    t = 1
    while s != seed:
        if t >= budget:
            raise Timeout(f"no return to seed within {budget} steps")
        s = step(F, s)
        t += 1
    return t


def msequence(ctx: FieldCtx, count: int) -> BitSequence:
    """``s_t`` = constant coefficient of ``a^t``, i.e. the linear recursion from seed (1,0,...,0)."""
    return generate(FeedbackFunction.linear(ctx), 1, count)


def verify_kind(seq: BitSequence) -> str:
    n, L = seq.order_n, len(seq)
    if L not in (1 << n, (1 << n) - 1):
        raise WrongLength(f"length {L} is neither 2^{n} nor 2^{n}-1")
    w = seq.windows()
    seen = np.zeros(1 << n, dtype=bool)
    seen[w] = True
    distinct = int(seen.sum())
    if L == 1 << n:
        return "debruijn" if distinct == L else "raw"
    return "modified_debruijn" if distinct == L and not seen[0] else "raw"


def classify(seq: BitSequence) -> BitSequence:
    return BitSequence(seq.bits, seq.order_n, verify_kind(seq))


def _zero_run_start(seq: BitSequence, run: int) -> int:
    target = b"\x00" * run
    doubled = seq.bits + seq.bits[: run - 1]
    p = doubled.find(target)
    if p < 0:
        raise Inconsistent(f"no run of {run} zeros")
    return p % len(seq)


def insert_zero(seq: BitSequence) -> BitSequence:
    """Modified de Bruijn -> de Bruijn, rotated to start with the 0^n window."""
    n = seq.order_n
    p = _zero_run_start(seq, n - 1)
    rot = seq.rotate(p).bits
    return classify(BitSequence(b"\x00" + rot, n))


def remove_zero(seq: BitSequence) -> BitSequence:
    """De Bruijn -> modified de Bruijn, rotated to start with the 0^(n-1)1 window."""
    n = seq.order_n
    p = _zero_run_start(seq, n)
    rot = seq.rotate(p).bits
    return classify(BitSequence(rot[1:], n))


def canonical_rotation(seq: BitSequence) -> BitSequence:
    n = seq.order_n
    if len(seq) == 1 << n:
        return seq.rotate(_zero_run_start(seq, n))
    p = _zero_run_start(seq, n - 1)
    # the run of n-1 zeros is unique, so it starts the 0^(n-1)1 window
    return seq.rotate(p)


def feedback_from_sequence(seq: BitSequence) -> int:
    """Truth table of ``f`` with ``s_{t+n} = s_t + f(s_{t+1}, ..., s_{t+n-1})``."""
    n = seq.order_n
    if len(seq) != 1 << n:
        raise WrongLength("feedback extraction needs a full de Bruijn sequence")
    w = seq.windows()
    suffix = w >> 1
    value = (w & 1) ^ (np.roll(w, -1) >> (n - 1))
    size = 1 << (n - 1)
    if not np.array_equal(np.bincount(suffix, minlength=size), np.full(size, 2)):
        raise Inconsistent("some suffix does not occur exactly twice")
    table = np.zeros(size, dtype=np.uint8)
    table[suffix] = value
    check = np.zeros(size, dtype=np.uint8)
    np.bitwise_xor.at(check, suffix, value.astype(np.uint8))
    if check.any():
        raise Inconsistent("suffix occurrences disagree on the feedback value")
    return int.from_bytes(np.packbits(table, bitorder="little").tobytes(), "little")


# ---------- algebraic degree


def anf(table: int, m: int) -> np.ndarray:
    """Algebraic normal form coefficients of an m-variable truth table (Moebius transform)."""
    raw = table.to_bytes(max(1, (1 << m) // 8 + 1), "little")
    a = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[: 1 << m].copy()
    for i in range(m):
        v = a.reshape(-1, 2, 1 << i)
        v[:, 1, :] ^= v[:, 0, :]
    return a


def _degree_exact(F: FeedbackFunction) -> int:
    m = F.n - 1
    coeffs = anf(F.truth_table(), m)
    idx = np.nonzero(coeffs)[0]
    if idx.size == 0:
        return 1
    weights = np.array([bin(int(i)).count("1") for i in idx])
    return max(1, int(weights.max()))


def _degree_subset_parity(F: FeedbackFunction, max_codim: int) -> int:
    # The monomial over S has coefficient #{u in J : supp(u) subset of S} mod 2.
    m = F.n - 1
    jumps = list(F.jump_suffixes)
    full = (1 << m) - 1
    for c in range(0, min(max_codim, m - 2) + 1):
        for T in combinations(range(m), c):
            tmask = 0
            for b in T:
                tmask |= 1 << b
            if sum(1 for u in jumps if not u & tmask) & 1:
                return m - c
    if max_codim >= m - 2:
        return 1
    raise Unsupported(
        f"degree not resolved within co-dimension {max_codim} for {len(jumps)} jump suffixes"
    )


def algebraic_degree(
    F: FeedbackFunction, exact_cap: int = EXACT_DEGREE_CAP, max_codim: int = 2
) -> int:
    if F.n <= exact_cap:
        return _degree_exact(F)
    k = len(F.jump_suffixes)
    if k == 0:
        return 1
    if k == 2:
        return max(1, F.n - 2)
    return _degree_subset_parity(F, max_codim)
