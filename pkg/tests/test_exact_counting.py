from fractions import Fraction

import pytest

from diagsos.counting import negatives, positives, profile, rank, zeros
from diagsos.exact import fmt, integerize, to_rational
from diagsos.prolongation import apply_list, build_direct


def test_to_rational_accepts_exact_inputs():
    assert to_rational("2/7") == Fraction(2, 7)
    assert to_rational("-3") == -3
    assert to_rational("0.125") == Fraction(1, 8)
    assert to_rational(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("bad", [0.5, True, None])
def test_to_rational_rejects_inexact(bad):
    with pytest.raises(TypeError):
        to_rational(bad)


def test_fmt_and_integerize():
    assert fmt(Fraction(4, 2)) == "2" and fmt(Fraction(-1, 3)) == "-1/3"
    assert integerize([Fraction(1, 2), Fraction(-1, 3), 0]) == [3, -2, 0]
    assert integerize([0, 0]) == [0, 0]


def test_profile_examples():
    p = profile([1, -1, 0])
    assert (p.P, p.N, p.Z, p.R) == (1, 1, 1, 2)
    jv = apply_list(build_direct(3, 1), [1, -1, 0])
    assert jv == [1, 0, 1, -1, -1, 0]
    q = profile(jv)
    assert (q.P, q.N, q.Z) == (2, 2, 2)
    e = profile([])
    assert (e.P, e.N, e.Z, e.R) == (0, 0, 0, 0)
    assert e.to_json() == {"P": 0, "N": 0, "Z": 0, "R": 0}


def test_counts_helpers():
    v = [Fraction(1, 2), -2, 0, 0, 3]
    assert (positives(v), negatives(v), zeros(v), rank(v)) == (2, 1, 2, 3)
