"""Brute-force ground truth at small orders.

``all_debruijn`` walks the order-n de Bruijn graph; ``distance_spectrum``
buckets the resulting feedback functions by distance to the linear one, and
``closure`` rebuilds the same set level by level from cross-joins alone.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .crossjoin import cross_join_apply, sequence_crossjoins
from .errors import CapExceeded, VerificationError
from .gf2 import registry_poly
from .register import BitSequence, FeedbackFunction, feedback_from_sequence, generate, verify_kind

log = logging.getLogger(__name__)

ENUM_CAP = 5
LARGE_CAP = 6


def _check(n: int, allow_large: bool, cap: int = ENUM_CAP) -> None:
    if n < 2:
        raise CapExceeded("order must be at least 2")
    limit = LARGE_CAP if allow_large else cap
    if n > limit:
        hint = "" if allow_large or n > LARGE_CAP else " (pass allow_large for n=6)"
        raise CapExceeded(f"enumeration of order {n} above cap {limit}{hint}")


def iter_debruijn(n: int, allow_large: bool = False) -> Iterator[BitSequence]:
    """Every de Bruijn sequence of order n, starting with 0^n, in lexicographic order.

    Depth-first search for Hamiltonian paths from the all-zero window that end
    at ``(1, 0, ..., 0)``, the only predecessor of 0^n besides itself.
    """
    _check(n, allow_large)
    L = 1 << n
    top = n - 1
    visited = bytearray(L)
    visited[0] = 1
    path = [0]
    # choice[d] = next bit to try from path[d]; 2 means exhausted
    choice = [0]
    while choice:
        d = len(path) - 1
        if len(path) == L:
            if path[-1] == 1:
                yield BitSequence(bytes(s & 1 for s in path), n, "debruijn")
            visited[path.pop()] = 0
            choice.pop()
            continue
        b = choice[-1]
        if b == 2:
            visited[path.pop()] = 0
            choice.pop()
            continue
        choice[-1] = b + 1
        nxt = (path[d] >> 1) | (b << top)
        if not visited[nxt]:
            visited[nxt] = 1
            path.append(nxt)
            choice.append(0)


def all_debruijn(n: int, allow_large: bool = False) -> list[BitSequence]:
    return list(iter_debruijn(n, allow_large))


def linear_table(n: int) -> int:
    """Truth table of the nonlinear part of the registry m-sequence recursion."""
    return FeedbackFunction.linear(registry_poly(n)).truth_table()


@dataclass(frozen=True)
class FunctionDistanceRecord:
    truth_table: int
    distance_k: int


def distance_records(n: int, allow_large: bool = False) -> Iterator[tuple[BitSequence, FunctionDistanceRecord]]:
    lin = linear_table(n)
    for seq in iter_debruijn(n, allow_large):
        f = feedback_from_sequence(seq)
        yield seq, FunctionDistanceRecord(f, bin(f ^ lin).count("1"))


def distance_spectrum(n: int, allow_large: bool = False) -> dict[int, int]:
    hist = Counter(rec.distance_k for _, rec in distance_records(n, allow_large))
    return dict(sorted(hist.items()))


@dataclass
class ClosureResult:
    n: int
    levels: list[set[int]] = field(default_factory=list)
    # distance histogram of each level relative to the linear function
    level_distances: list[dict[int, int]] = field(default_factory=list)

    @property
    def counts(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def union(self) -> set[int]:
        out: set[int] = set()
        for lv in self.levels:
            out |= lv
        return out


def _sequence_of(n: int, table: int) -> BitSequence:
    F = FeedbackFunction.from_table(n, table)
    return BitSequence(generate(F, 0, 1 << n).bits, n, "debruijn")


def closure(
    n: int,
    max_levels: int | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> ClosureResult:
    """Repeated cross-joins from the m-sequence de Bruijn function, sieved by truth table."""
    _check(n, False)
    lin = linear_table(n)
    start = lin ^ 1  # add the minterm of the all-zero suffix
    seen = {start}
    result = ClosureResult(n)
    level = {start}
    while level:
        result.levels.append(level)
        result.level_distances.append(dict(sorted(Counter(bin(f ^ lin).count("1") for f in level).items())))
        if progress:
            progress(len(result.levels) - 1, len(level))
        log.debug("closure n=%d level %d: %d functions", n, len(result.levels) - 1, len(level))
        if max_levels is not None and len(result.levels) >= max_levels:
            break
        nxt: set[int] = set()
        for f in sorted(level):
            seq = _sequence_of(n, f)
            for q in sequence_crossjoins(seq):
                joined = cross_join_apply(seq, tuple(q))
                g = feedback_from_sequence(joined)
                if g not in seen:
                    seen.add(g)
                    nxt.add(g)
        level = nxt
    return result


def check_generates_debruijn(n: int, table: int) -> None:
    if verify_kind(_sequence_of(n, table)) != "debruijn":
        raise VerificationError(f"truth table {table:x} does not generate a de Bruijn sequence")
