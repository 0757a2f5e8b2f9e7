"""Multi-indices in left-lexicographic order, monomial spaces and shadows.

A multi-index is a plain tuple of nonnegative ints.  The order used
everywhere is x_1^d, x_1^{d-1} x_2, ..., x_n^d, i.e. descending
lexicographic order on exponent tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable

MultiIndex = tuple[int, ...]


def _compositions(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(n - 1, d - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def lex_basis(n: int, d: int) -> tuple[MultiIndex, ...]:
    """All degree-d multi-indices in n variables, x_1^d first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 0:
        raise ValueError("d must be >= 0")
    return tuple(_compositions(n, d))


@lru_cache(maxsize=None)
def _positions(n: int, d: int) -> dict[MultiIndex, int]:
    return {m: i for i, m in enumerate(lex_basis(n, d))}


def dim(n: int, d: int) -> int:
    """|P_d| = C(n+d-1, d)."""
    return comb(n + d - 1, d)


def index_of(mi: Iterable[int]) -> int:
    mi = tuple(mi)
    try:
        return _positions(len(mi), sum(mi))[mi]
    except KeyError:
        raise ValueError(f"not a multi-index: {mi}") from None


def monomial_at(n: int, d: int, i: int) -> MultiIndex:
    basis = lex_basis(n, d)
    if not 0 <= i < len(basis):
        raise IndexError(f"index {i} out of range for n={n}, d={d}")
    return basis[i]


def unit(n: int, j: int) -> MultiIndex:
    return tuple(1 if k == j else 0 for k in range(n))


def add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def monomial_str(mi: MultiIndex, offset: int = 1) -> str:
    parts = []
    for k, e in enumerate(mi):
        if e == 1:
            parts.append(f"x{k + offset}")
        elif e > 1:
            parts.append(f"x{k + offset}^{e}")
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class MonomialSpace:
    """A space spanned by degree-d monomials in n variables."""

    n: int
    d: int
    members: frozenset[MultiIndex]

    def __post_init__(self):
        for m in self.members:
            if len(m) != self.n or sum(m) != self.d or min(m, default=0) < 0:
                raise ValueError(f"{m} is not a degree-{self.d} index in {self.n} variables")

    @classmethod
    def of(cls, n: int, d: int, members: Iterable[Iterable[int]]) -> "MonomialSpace":
        return cls(n, d, frozenset(tuple(m) for m in members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, mi):
        return tuple(mi) in self.members

    def sorted(self) -> list[MultiIndex]:
        return sorted(self.members, key=index_of)

    def indices(self) -> list[int]:
        return sorted(index_of(m) for m in self.members)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "members": [list(m) for m in self.sorted()]}

    @classmethod
    def from_json(cls, obj) -> "MonomialSpace":
        """Accepts ``{"n", "d", "members"}`` or a bare non-empty list of indices."""
        if isinstance(obj, list):
            if not obj:
                raise ValueError("a bare list must be non-empty; use {n, d, members}")
            return cls.of(len(obj[0]), sum(obj[0]), obj)
        return cls.of(obj["n"], obj["d"], obj["members"])


def shadow(space: MonomialSpace) -> MonomialSpace:
    """Degree-(d+1) part of the ideal generated by ``space``."""
    n = space.n
    out = {add(m, unit(n, j)) for m in space.members for j in range(n)}
    return MonomialSpace(n, space.d + 1, frozenset(out))


def codim(space: MonomialSpace) -> int:
    return dim(space.n, space.d) - len(space)


def lex_segment(n: int, d: int, size: int) -> MonomialSpace:
    """The first ``size`` monomials of ``lex_basis(n, d)``."""
    basis = lex_basis(n, d)
    if not 0 <= size <= len(basis):
        raise ValueError(f"size {size} exceeds dim {len(basis)}")
    return MonomialSpace(n, d, frozenset(basis[:size]))


def support_space(n: int, d: int, coeffs) -> MonomialSpace:
    """Monomial space spanned by the nonzero coefficients of a lex-ordered vector."""
    basis = lex_basis(n, d)
    if len(coeffs) != len(basis):
        raise ValueError("coefficient vector length does not match dimension")
    return MonomialSpace(n, d, frozenset(m for m, c in zip(basis, coeffs) if c != 0))
