import time

import pytest

from cjf.enumeration import (
    all_debruijn,
    check_generates_debruijn,
    closure,
    distance_records,
    distance_spectrum,
    iter_debruijn,
    linear_table,
)
from cjf.errors import CapExceeded, VerificationError
from cjf.fryers import debruijn_count, fryers_spectrum
from cjf.register import FeedbackFunction, feedback_from_sequence, period, verify_kind


def brute_debruijn_tables(n):
    """Truth tables f with x_0 + f(suffix) cycling through all 2^n states."""
    L = 1 << n
    return {t for t in range(1 << (L >> 1)) if period(FeedbackFunction.from_table(n, t), 0) == L}


@pytest.mark.parametrize("n, expected", [(2, 1), (3, 2), (4, 16), (5, 2048)])
def test_counts(n, expected):
    assert len(all_debruijn(n)) == expected == debruijn_count(n)


def test_order_three_list():
    assert [str(s) for s in all_debruijn(3)] == ["00010111", "00011101"]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_all_valid_and_sorted(n):
    seqs = all_debruijn(n)
    assert all(verify_kind(s) == "debruijn" for s in seqs)
    assert all(s.bits[:n] == bytes(n) for s in seqs)
    strs = [str(s) for s in seqs]
    assert strs == sorted(strs) and len(set(strs)) == len(strs)


@pytest.mark.parametrize("n", [4, 5])
def test_against_truth_table_search(n):
    from_dfs = {feedback_from_sequence(s) for s in iter_debruijn(n)}
    assert from_dfs == brute_debruijn_tables(n)


def test_caps():
    with pytest.raises(CapExceeded, match="allow_large"):
        next(iter_debruijn(6))
    with pytest.raises(CapExceeded):
        next(iter_debruijn(7, allow_large=True))
    with pytest.raises(CapExceeded):
        closure(6)


def test_order_six_lazy_start():
    # the search is far too long to finish here, but the first hit must be valid
    first = next(iter_debruijn(6, allow_large=True))
    assert verify_kind(first) == "debruijn"


def test_linear_table_is_msequence():
    for n in range(2, 9):
        F = FeedbackFunction.from_table(n, linear_table(n))
        assert period(F, 1) == (1 << n) - 1


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_distance_spectrum_matches_formula(n):
    spectrum = distance_spectrum(n)
    assert all(k % 2 == 1 for k in spectrum)
    assert spectrum == fryers_spectrum(n).as_dict()


def test_distance_records_fields():
    lin = linear_table(4)
    for seq, rec in distance_records(4):
        assert rec.truth_table == feedback_from_sequence(seq)
        assert rec.distance_k == bin(rec.truth_table ^ lin).count("1")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_closure(n):
    t0 = time.perf_counter()
    res = closure(n)
    assert res.total == debruijn_count(n)
    union = res.union()
    assert len(union) == res.total  # levels are disjoint
    assert union == {feedback_from_sequence(s) for s in iter_debruijn(n)}
    spectrum = fryers_spectrum(n)
    for lvl, dist in enumerate(res.level_distances):
        assert dist == {2 * lvl + 1: spectrum[2 * lvl + 1]}
    assert time.perf_counter() - t0 < 60


def test_closure_members_generate_debruijn():
    for f in closure(4).union():
        check_generates_debruijn(4, f)
    with pytest.raises(VerificationError):
        check_generates_debruijn(4, linear_table(4))


def test_closure_levels_and_progress():
    seen = []
    res = closure(5, max_levels=2, progress=lambda lvl, cnt: seen.append((lvl, cnt)))
    assert res.counts == [1, 35] and seen == [(0, 1), (1, 35)]
