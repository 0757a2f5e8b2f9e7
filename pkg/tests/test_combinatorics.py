from math import comb

import pytest
from hypothesis import given, strategies as st

from diagsos.combinatorics import (binomial, conjecture_bands, kappa0, macaulay_rep,
                                   macaulay_step)


@pytest.mark.parametrize("a,b,want", [(4, 2, 6), (7, 3, 35), (3, 5, 0), (0, 0, 1)])
def test_binomial_values(a, b, want):
    assert binomial(a, b) == want


def test_binomial_rejects_negative():
    with pytest.raises(ValueError):
        binomial(-1, 2)


def test_macaulay_rep_examples():
    assert macaulay_rep(5, 2).terms == ((3, 2), (2, 1))
    assert macaulay_rep(0, 3).terms == ()


def test_macaulay_rep_of_codim_identity():
    # C(n+d-1,d) - 1 = C(n-1,1) + ... + C(n+d-2,d) for n=3, d=2
    rep = macaulay_rep(comb(4, 2) - 1, 2)
    assert rep.total() == 5 and rep.is_valid()


@pytest.mark.parametrize("N,d,want", [(5, 2, 7), (0, 1, 0), (0, 4, 0), (4, 1, 10)])
def test_macaulay_step(N, d, want):
    assert macaulay_step(N, d) == want


@given(st.integers(0, 3000), st.integers(1, 7))
def test_macaulay_rep_is_valid_and_unique_greedy(N, d):
    rep = macaulay_rep(N, d)
    assert rep.total() == N
    assert rep.is_valid()
    tops = [t for t, _ in rep.terms]
    assert tops == sorted(tops, reverse=True) and len(set(tops)) == len(tops)


@given(st.integers(1, 400), st.integers(1, 5))
def test_macaulay_step_is_monotone(N, d):
    assert macaulay_step(N, d) >= macaulay_step(N - 1, d)


@pytest.mark.parametrize("n,want", [(2, 1), (3, 1), (4, 2), (6, 2), (7, 3), (11, 4)])
def test_kappa0(n, want):
    k = kappa0(n)
    assert k == want
    assert k * (k + 1) // 2 < n <= (k + 1) * (k + 2) // 2


def test_bands():
    b6 = conjecture_bands(6)
    assert b6.threshold == 14
    assert [list(x) for x in b6.bands] == [[0, 0], [6, 6], [11, 12]]
    b2 = conjecture_bands(2)
    assert b2.threshold == 2 and [list(x) for x in b2.bands] == [[0, 0], [2, 2]]


def test_band_classification():
    b = conjecture_bands(6)
    assert b.classify(0)["kind"] == "zero"
    assert b.classify(6) == {"kind": "in-band", "kappa": 1}
    assert b.classify(12) == {"kind": "in-band", "kappa": 2}
    assert b.classify(8)["kind"] == "in-gap"
    assert b.classify(14)["kind"] == "above-threshold"
