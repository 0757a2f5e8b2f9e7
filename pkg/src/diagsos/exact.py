"""Rational parsing and formatting; no floats cross this boundary."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational


def to_rational(value) -> Fraction:
    """Parse an int, Fraction, or a string like ``"-3"``, ``"2/7"``, ``"0.125"``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"refusing inexact coefficient {value!r}")


def fmt(value) -> str:
    q = Fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def integerize(values) -> list[int]:
    """Positive multiple of ``values`` with coprime integer entries (all zero stays zero)."""
    qs = [Fraction(v) for v in values]
    den = lcm(*(q.denominator for q in qs)) if qs else 1
    ints = [int(q * den) for q in qs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints
