"""The prolongation matrix J_{n,d} (multiplication by x_1 + ... + x_n).

``build_direct`` is the source of truth; ``build_recursive`` assembles the
same matrix from J_{n,d-1}, J_{n-1,d} and an identity block and is kept as an
independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .exact import fmt, to_rational
from .monomials import add, index_of, lex_basis, unit


@dataclass(frozen=True)
class ProlongMatrix:
    n: int
    d: int
    rows: int
    cols: int
    entries: tuple[tuple[int, int], ...]  # sorted (row, col) positions of the ones
    col_rows: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if not self.col_rows:
            per_col = [[] for _ in range(self.cols)]
            for r, c in self.entries:
                per_col[c].append(r)
            object.__setattr__(self, "col_rows", tuple(tuple(rs) for rs in per_col))

    def row_cols(self) -> list[list[int]]:
        out = [[] for _ in range(self.rows)]
        for r, c in self.entries:
            out[r].append(c)
        return out

    def to_dense(self, dtype=np.int64) -> np.ndarray:
        M = np.zeros((self.rows, self.cols), dtype=dtype)
        for r, c in self.entries:
            M[r, c] = 1
        return M

    def to_triplet(self) -> str:
        lines = [f"{self.rows} {self.cols} {len(self.entries)}"]
        lines += [f"{r} {c} 1" for r, c in self.entries]
        return "\n".join(lines) + "\n"

    def to_dense_text(self) -> str:
        grid = [["0"] * self.cols for _ in range(self.rows)]
        for r, c in self.entries:
            grid[r][c] = "1"
        return "\n".join(" ".join(row) for row in grid) + "\n"


@lru_cache(maxsize=None)
def build_direct(n: int, d: int) -> ProlongMatrix:
    """Entry (beta, alpha) is 1 iff beta - alpha is a unit multi-index."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    entries = []
    for c, alpha in enumerate(lex_basis(n, d)):
        for j in range(n):
            entries.append((index_of(add(alpha, unit(n, j))), c))
    entries.sort()
    return ProlongMatrix(n, d, comb(n + d, d + 1), comb(n + d - 1, d), tuple(entries))


@lru_cache(maxsize=None)
def build_recursive(n: int, d: int) -> ProlongMatrix:
    """Block assembly

        J_{n,d} = [ J_{n,d-1} | 0 ; I ]
                  [    0      | J_{n-1,d} ]

    where the identity sits in the last C(n+d-2, d) rows of the top block.
    """
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    rows, cols = comb(n + d, d + 1), comb(n + d - 1, d)
    if n == 1:
        return ProlongMatrix(1, d, 1, 1, ((0, 0),))
    top_rows = comb(n + d - 1, d)        # monomials divisible by x_1
    left_cols = comb(n + d - 2, d - 1) if d >= 1 else 0
    ident = comb(n + d - 2, d)
    entries = []
    if d >= 1:
        entries += build_recursive(n, d - 1).entries
    for t in range(ident):
        entries.append((top_rows - ident + t, left_cols + t))
    for r, c in build_recursive(n - 1, d).entries:
        entries.append((top_rows + r, left_cols + c))
    entries.sort()
    return ProlongMatrix(n, d, rows, cols, tuple(entries))


@dataclass(frozen=True)
class CoeffVector:
    """Exact coefficients of a degree-d form in n variables, lex-indexed."""

    n: int
    d: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != comb(self.n + self.d - 1, self.d):
            raise ValueError(
                f"expected {comb(self.n + self.d - 1, self.d)} coefficients for "
                f"n={self.n}, d={self.d}, got {len(self.entries)}")

    @classmethod
    def of(cls, n: int, d: int, values: Sequence) -> "CoeffVector":
        return cls(n, d, tuple(to_rational(v) for v in values))

    @classmethod
    def zero(cls, n: int, d: int) -> "CoeffVector":
        return cls(n, d, (Fraction(0),) * comb(n + d - 1, d))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.entries)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.entries)

    def strings(self) -> list[str]:
        return [fmt(v) for v in self.entries]


def apply_list(J: ProlongMatrix, h: Sequence) -> list:
    """J h for a plain sequence of exact numbers (ints or Fractions)."""
    if len(h) != J.cols:
        raise ValueError(f"dimension mismatch: J has {J.cols} columns, vector has {len(h)}")
    out = [0] * J.rows
    for c, rows in enumerate(J.col_rows):
        v = h[c]
        if v:
            for r in rows:
                out[r] += v
    return out


def apply(J: ProlongMatrix, h: CoeffVector) -> CoeffVector:
    if (h.n, h.d) != (J.n, J.d):
        raise ValueError(f"vector is (n={h.n}, d={h.d}) but matrix is J_{{{J.n},{J.d}}}")
    return CoeffVector(J.n, J.d + 1, tuple(Fraction(v) for v in apply_list(J, h.entries)))


def prolong(h: CoeffVector) -> CoeffVector:
    return apply(build_direct(h.n, h.d), h)


def iterated_apply(n: int, d_from: int, d_to: int, h: CoeffVector) -> CoeffVector:
    """J_{n,d_to-1} ... J_{n,d_from} h, i.e. the coefficients of A * S_1^(d_to-d_from)."""
    if d_from > d_to:
        raise ValueError("d_from must not exceed d_to")
    if (h.n, h.d) != (n, d_from):
        raise ValueError("dimension mismatch")
    for d in range(d_from, d_to):
        h = apply(build_direct(n, d), h)
    return h


def iterated_list(n: int, d_from: int, d_to: int, h: Sequence) -> list:
    h = list(h)
    for d in range(d_from, d_to):
        h = apply_list(build_direct(n, d), h)
    return h


def block_sizes(n: int, d: int) -> list[int]:
    """Sizes of h_0..h_d, the blocks by decreasing power of x_1."""
    return [comb(n + j - 2, j) for j in range(d + 1)]


def split_blocks(n: int, d: int, h: Sequence) -> list[list]:
    out, pos = [], 0
    for size in block_sizes(n, d):
        out.append(list(h[pos:pos + size]))
        pos += size
    return out


@dataclass(frozen=True)
class GammaDecomp:
    n: int
    d: int
    blocks: tuple[CoeffVector, ...]   # h_j over n-1 variables, degree j
    slacks: tuple[CoeffVector, ...]   # gamma_0 = h_0, gamma_i = J h_{i-1} + h_i
    tail: CoeffVector                 # J_{n-1,d} h_d

    def reassemble(self) -> CoeffVector:
        return CoeffVector(self.n, self.d, tuple(v for b in self.blocks for v in b))

    def gamma(self) -> tuple[Fraction, ...]:
        return tuple(v for g in self.slacks for v in g)


def slack_lists(n: int, d: int, h: Sequence) -> tuple[list[list], list]:
    """gamma blocks and tail of a plain lex-ordered vector (n >= 2)."""
    blocks = split_blocks(n, d, h)
    gammas = [list(blocks[0])]
    for i in range(1, d + 1):
        prev = apply_list(build_direct(n - 1, i - 1), blocks[i - 1])
        gammas.append([a + b for a, b in zip(prev, blocks[i])])
    tail = apply_list(build_direct(n - 1, d), blocks[d])
    return gammas, tail


def decompose(h: CoeffVector) -> GammaDecomp:
    n, d = h.n, h.d
    if n < 2:
        raise ValueError("the x_1-power decomposition needs n >= 2")
    blocks = split_blocks(n, d, h.entries)
    gammas, tail = slack_lists(n, d, h.entries)
    return GammaDecomp(
        n, d,
        tuple(CoeffVector(n - 1, j, tuple(b)) for j, b in enumerate(blocks)),
        tuple(CoeffVector(n - 1, j, tuple(Fraction(v) for v in g)) for j, g in enumerate(gammas)),
        CoeffVector(n - 1, d + 1, tuple(Fraction(v) for v in tail)),
    )
