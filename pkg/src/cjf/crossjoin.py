"""Cross-join pairs of an m-sequence located with Zech logarithms.

Position ``t`` of the m-sequence carries the state ``S_t = (s_t, ..., s_{t+n-1})``
with ``s_u`` the constant coefficient of ``a^u``.  With that correspondence
``S_t`` and ``S_{Z(t)}`` are conjugate: they share the suffix and differ in
``x_0``.  So a conjugate pair is ``{t, Z(t)}``, and two pairs form a cross-join
pair when they interleave on the cycle.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    DuplicateSuffix,
    InvalidInput,
    InvalidQuadruple,
    NotConjugate,
    Overlap,
    OverlappingPairs,
    WrongOrder,
)
from .gf2 import FieldCtx, ZechTable
from .register import WINDOW_CAP, BitSequence, FeedbackFunction


@dataclass(frozen=True, order=True)
class CrossJoinQuadruple:
    """Positions of ``alpha, beta, conj(alpha), conj(beta)`` in cycle order."""

    i: int
    j: int
    zi: int
    zj: int

    def __iter__(self):
        return iter((self.i, self.j, self.zi, self.zj))

    @property
    def pairs(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.i, self.zi), (self.j, self.zj)

    def to_json(self) -> dict:
        return {k: str(v) for k, v in zip(("i", "j", "zi", "zj"), self)}

    @classmethod
    def from_json(cls, obj: dict) -> "CrossJoinQuadruple":
        try:
            return cls(*(int(obj[k]) for k in ("i", "j", "zi", "zj")))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed quadruple JSON: {exc}") from exc


@dataclass(frozen=True)
class ConjugatePair:
    t: int
    zt: int

    def __post_init__(self):
        if self.t > self.zt:
            t, zt = self.zt, self.t
            object.__setattr__(self, "t", t)
            object.__setattr__(self, "zt", zt)


# ---------- states


@lru_cache(maxsize=4096)
def state_at(ctx: FieldCtx, t: int) -> int:
    """Packed state ``S_t``; one exponentiation plus ``n - 1`` shifts by ``a``."""
    if not 0 <= t < ctx.order:
        raise InvalidInput(f"position {t} outside [0, 2^{ctx.n} - 1)")
    e = ctx.power_of_root(t)
    s = 0
    for k in range(ctx.n):
        s |= (e & 1) << k
        e = ctx.mul_root(e)
    return s


def conjugate(s: int) -> int:
    return s ^ 1


def suffix(s: int) -> int:
    return s >> 1


def is_crossjoin_quadruple(i: int, j: int, zi: int, zj: int, N: int) -> bool:
    d1, d2, d3 = (j - i) % N, (zi - i) % N, (zj - i) % N
    return 0 < d1 < d2 < d3


def conjugate_pairs(table: ZechTable) -> list[ConjugatePair]:
    """Every pair ``{t, Z(t)}``, each once, sorted by the smaller exponent."""
    if table.kind != "full":
        raise InvalidInput("conjugate pair enumeration needs a full Zech table")
    z = np.asarray(table.entries, dtype=np.int64)
    t = np.arange(1, z.size + 1, dtype=np.int64)
    keep = t < z
    return [ConjugatePair(int(a), int(b)) for a, b in zip(t[keep], z[keep])]


def _interleaved(lo: np.ndarray, hi: np.ndarray, start: int, stop: int) -> list[CrossJoinQuadruple]:
    # Pairs sorted by lo; pair a interleaves a later pair b iff lo_b < hi_a < hi_b.
    out = []
    for a in range(start, stop):
        la, ha = lo[a], hi[a]
        rest_lo, rest_hi = lo[a + 1 :], hi[a + 1 :]
        sel = (rest_lo < ha) & (rest_hi > ha)
        for lb, hb in zip(rest_lo[sel], rest_hi[sel]):
            out.append(CrossJoinQuadruple(int(la), int(lb), int(ha), int(hb)))
    return out


def _find_interleaved(lo: np.ndarray, hi: np.ndarray, workers: int = 1) -> list[CrossJoinQuadruple]:
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    P = lo.size
    if workers <= 1 or P < 64:
        return _interleaved(lo, hi, 0, P)
    bounds = np.linspace(0, P, workers + 1).astype(int)
    with ThreadPoolExecutor(workers) as pool:
        parts = pool.map(lambda k: _interleaved(lo, hi, bounds[k], bounds[k + 1]), range(workers))
        out = [q for part in parts for q in part]
    out.sort()
    return out


def find_crossjoin_pairs(ctx: FieldCtx, table: ZechTable, workers: int = 1) -> list[CrossJoinQuadruple]:
    """All cross-join pairs of the m-sequence of ``ctx``, canonically labelled.

    ``i`` is the smallest of the four exponents and ``j`` the member of the
    other pair inside the cyclic interval ``(i, Z(i))``.
    """
    if table.kind != "full":
        raise CapExceeded(f"n={ctx.n}: enumerating cross-join pairs needs a full Zech table")
    pairs = conjugate_pairs(table)
    lo = np.array([p.t for p in pairs], dtype=np.int64)
    hi = np.array([p.zt for p in pairs], dtype=np.int64)
    return _find_interleaved(lo, hi, workers)


# ---------- synthesis


def synthesize_nfsr(ctx: FieldCtx, quadruples: Iterable[CrossJoinQuadruple]) -> FeedbackFunction:
    """Linear recursion of ``ctx`` plus two jump minterms per cross-join pair."""
    quadruples = list(quadruples)
    N = ctx.order
    exps: set[int] = set()
    jumps: set[int] = set()
    for q in quadruples:
        if not is_crossjoin_quadruple(*q, N):
            raise InvalidQuadruple(f"{tuple(q)} is not in cross-join order")
        si, sj = state_at(ctx, q.i), state_at(ctx, q.j)
        if state_at(ctx, q.zi) != conjugate(si) or state_at(ctx, q.zj) != conjugate(sj):
            raise InvalidQuadruple(f"{tuple(q)}: positions are not conjugate pairs")
        if exps.intersection(q):
            raise OverlappingPairs(f"{tuple(q)} shares an exponent with another quadruple")
        exps.update(q)
        for u in (suffix(si), suffix(sj)):
            if u in jumps:
                raise DuplicateSuffix(f"suffix {u:x} used twice")
            jumps.add(u)
    return FeedbackFunction.linear(ctx).with_jumps(jumps)


def disjoint_family(ctx: FieldCtx, stride: int, count: int) -> list[CrossJoinQuadruple]:
    """``c_i = (2^(s i), 2^(1 + s i), n 2^(s i), n 2^(1 + s i))`` for ``x^n + x + 1``.

    Only ``Z(1) = n`` and doubling are used.  Every member is checked for
    cross-join order and the whole family for disjointness.
    """
    n = ctx.n
    if ctx.poly.exponents != (n, 1, 0):
        raise InvalidInput(f"{ctx.poly} is not of the form x^n+x+1")
    if stride < 1 or count < 0:
        raise InvalidInput("stride must be positive and count non-negative")
    N = ctx.order
    family = []
    seen: set[int] = set()
    for idx in range(count):
        e = stride * idx
        q = CrossJoinQuadruple(
            pow(2, e, N), pow(2, e + 1, N), n * pow(2, e, N) % N, n * pow(2, e + 1, N) % N
        )
        if not is_crossjoin_quadruple(*q, N):
            raise InvalidQuadruple(
                f"family member {idx} = {tuple(q)} is not in cross-join order modulo 2^{n}-1"
            )
        if seen.intersection(q) or len(set(q)) != 4:
            raise Overlap(f"family member {idx} overlaps an earlier member")
        seen.update(q)
        family.append(q)
    return family


# ---------- cross-join on explicit sequences


def cross_join_apply(seq: BitSequence, q: Sequence[int]) -> BitSequence:
    """Swap successors at both conjugate pairs at positions ``q = (p1, p2, p3, p4)``.

    Positions outside ``p1 .. p4`` keep their place; the three blocks
    ``(p1, p2]``, ``(p2, p3]``, ``(p3, p4]`` are written back in reverse order.
    The states of the result at ``(p1, p1 + p4 - p3, p1 + p4 - p2, p4)`` form a
    cross-join pair again, and applying it restores the input.
    """
    n, L = seq.order_n, len(seq)
    if n > WINDOW_CAP:
        raise CapExceeded(f"sequence cross-join needs n <= {WINDOW_CAP}")
    p1, p2, p3, p4 = (int(p) for p in q)
    if len({p1, p2, p3, p4}) != 4 or not all(0 <= p < L for p in (p1, p2, p3, p4)):
        raise InvalidInput(f"positions {tuple(q)} must be four distinct indices below {L}")
    if seq.window(p3) != conjugate(seq.window(p1)) or seq.window(p4) != conjugate(seq.window(p2)):
        raise NotConjugate(f"positions {tuple(q)} do not hold two conjugate pairs")
    if not is_crossjoin_quadruple(p1, p2, p3, p4, L):
        raise WrongOrder(f"positions {tuple(q)} are not in cross-join order")
    b = seq.bits[p1:] + seq.bits[:p1]
    r2, r3, r4 = (p2 - p1) % L, (p3 - p1) % L, (p4 - p1) % L
    out = b[:1] + b[r3 + 1 : r4 + 1] + b[r2 + 1 : r3 + 1] + b[1 : r2 + 1] + b[r4 + 1 :]
    out = out[L - p1 :] + out[: L - p1] if p1 else out
    return BitSequence(out, n, seq.kind)


def crossjoin_partner(q: Sequence[int], L: int) -> tuple[int, int, int, int]:
    """Positions of the quadruple that undoes ``cross_join_apply(seq, q)``."""
    p1, p2, p3, p4 = q
    return p1, (p1 + p4 - p3) % L, (p1 + p4 - p2) % L, p4


def sequence_crossjoins(seq: BitSequence) -> list[CrossJoinQuadruple]:
    """All cross-join pairs of an explicit cyclic sequence, as positions."""
    n = seq.order_n
    if n > WINDOW_CAP:
        raise CapExceeded(f"position map needs n <= {WINDOW_CAP}")
    w = seq.windows()
    where = np.full(1 << n, -1, dtype=np.int64)
    where[w] = np.arange(w.size)
    pos = np.arange(w.size)
    even = (w & 1) == 0
    partner = where[w[even] ^ 1]
    found = partner >= 0
    a, b = pos[even][found], partner[found]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    return _find_interleaved(lo, hi)


def arcs_disjoint(quadruples: Sequence[CrossJoinQuadruple], N: int) -> bool:
    """True when the arcs ``[i, zj]`` of the quadruples are pairwise disjoint.

    A cross-join only reorders the states inside its own arc, so with
    disjoint arcs the quadruples stay valid after each other's application
    and every subset joins into a single cycle.
    """
    arcs = []
    for q in quadruples:
        if not is_crossjoin_quadruple(*q, N):
            return False
        arcs.append((q.i, (q.zj - q.i) % N))
    arcs.sort()
    for (a, la), (b, _) in zip(arcs, arcs[1:]):
        if a + la >= b:
            return False
    if len(arcs) > 1:
        a, la = arcs[-1]
        if a + la >= arcs[0][0] + N:
            return False
    return True
