import random
from math import comb

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cjf.errors import CapExceeded, InvalidInput
from cjf.fryers import (
    SPECTRUM_CAP,
    count,
    debruijn_count,
    falling_factorial_count,
    fryers_spectrum,
    generating_function_at_one,
    helleseth_klove,
    iter_counts,
    spectrum_sum,
)

KNOWN = {
    4: {1: 1, 3: 7, 5: 7, 7: 1},
    5: {1: 1, 3: 35, 5: 273, 7: 715, 9: 715, 11: 273, 13: 35, 15: 1},
    6: {1: 1, 3: 155, 5: 6293, 7: 105183, 9: 876525, 11: 4032015, 13: 10855425,
        15: 17678835, 17: 17678835, 19: 10855425, 21: 4032015, 23: 876525,
        25: 105183, 27: 6293, 29: 155, 31: 1},
}


def series_oracle(n):
    y = sympy.symbols("y")
    M = 2 ** (n - 1)
    G = sympy.expand(((1 + y) ** M - (1 - y) ** M) / sympy.Integer(2) ** n)
    poly = sympy.Poly(G, y)
    return {k: int(poly.coeff_monomial(y**k)) for k in range(1, M) if poly.coeff_monomial(y**k)}


@pytest.mark.parametrize("n", [4, 5, 6])
def test_known_values(n):
    assert fryers_spectrum(n).as_dict() == KNOWN[n]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_series_oracle(n):
    assert fryers_spectrum(n).as_dict() == series_oracle(n)


@pytest.mark.parametrize("n", range(2, 13))
def test_comb_oracle(n):
    M = 2 ** (n - 1)
    for k, c in iter_counts(n):
        assert comb(M, k) % M == 0
        assert c == comb(M, k) // M


@pytest.mark.parametrize("n", range(2, 13))
def test_falling_factorial_exhaustive(n):
    M = 2 ** (n - 1)
    for k in range(1, M, 2):
        assert falling_factorial_count(n, k) == count(n, k)


@pytest.mark.parametrize("n", range(13, 21))
def test_falling_factorial_sampled(n):
    r = random.Random(n)
    M = 2 ** (n - 1)
    # large k make the product itself the bottleneck, so sample the low range
    ks = {1, 3, 5} | {2 * r.randrange(1024) + 1 for _ in range(30)}
    for k in ks:
        assert falling_factorial_count(n, k) == count(n, k)


@given(st.integers(2, 16), st.data())
def test_symmetry_and_boundaries(n, data):
    M = 2 ** (n - 1)
    assert count(n, 1) == 1 and count(n, M - 1) == 1
    k = 2 * data.draw(st.integers(0, M // 2 - 1)) + 1
    assert count(n, k) == count(n, M - k)
    even = 2 * data.draw(st.integers(0, M // 2))
    assert count(n, even) == 0


@pytest.mark.parametrize("n", range(3, 21))
def test_helleseth_klove_is_k3(n):
    assert helleseth_klove(n) == fryers_spectrum(n)[3]


@pytest.mark.parametrize("n", range(2, 21))
def test_sum_is_debruijn_count(n):
    assert spectrum_sum(n) == debruijn_count(n)
    assert generating_function_at_one(n) == debruijn_count(n)


def test_sum_explicit_vs_closed_form():
    for n in range(2, 17):
        assert spectrum_sum(n) == spectrum_sum(n, explicit_cap=0)
    assert spectrum_sum(3) == 2
    assert spectrum_sum(6) == 2**26


def test_table_mapping():
    t = fryers_spectrum(20)
    assert len(t) == 2**18
    assert t[3] == helleseth_klove(20)
    with pytest.raises(KeyError):
        t[4]
    with pytest.raises(CapExceeded):
        t.as_dict()
    assert sum(1 for _ in zip(range(5), t.items())) == 5


def test_caps():
    fryers_spectrum(SPECTRUM_CAP)[1]
    with pytest.raises(CapExceeded):
        fryers_spectrum(SPECTRUM_CAP + 1)
    with pytest.raises(CapExceeded):
        spectrum_sum(65)
    with pytest.raises(InvalidInput):
        fryers_spectrum(1)
