"""Binomials, Macaulay representations and the conjecture's rank bands."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, isqrt


def binomial(a: int, b: int) -> int:
    """C(a, b) as a Python int; zero when b > a."""
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return comb(a, b)


@dataclass(frozen=True)
class MacaulayRep:
    """N = C(k_d, d) + C(k_{d-1}, d-1) + ... + C(k_delta, delta).

    ``terms`` holds the pairs (k_i, i) with i descending from d.
    """

    N: int
    d: int
    terms: tuple[tuple[int, int], ...]

    def total(self) -> int:
        return sum(comb(k, i) for k, i in self.terms)

    def is_valid(self) -> bool:
        if self.total() != self.N:
            return False
        if (not self.terms) != (self.N == 0):
            return False
        prev_k, prev_i = None, self.d + 1
        for k, i in self.terms:
            if i != prev_i - 1 or k < i or i < 1:
                return False
            if prev_k is not None and k >= prev_k:
                return False
            prev_k, prev_i = k, i
        return True

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "terms": [[k, i] for k, i in self.terms],
            "step": macaulay_step(self.N, self.d),
        }


def _largest_top(N: int, i: int) -> int:
    # largest k >= i with C(k, i) <= N, for N >= 1
    lo, hi = i, i + 1
    while comb(hi, i) <= N:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if comb(mid, i) <= N:
            lo = mid
        else:
            hi = mid
    return lo


def macaulay_rep(N: int, d: int) -> MacaulayRep:
    """Greedy d-th Macaulay representation of N."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if N < 0:
        raise ValueError("N must be nonnegative")
    terms = []
    rest = N
    i = d
    while rest > 0:
        k = _largest_top(rest, i)
        terms.append((k, i))
        rest -= comb(k, i)
        i -= 1
    return MacaulayRep(N, d, tuple(terms))


def macaulay_step(N: int, d: int) -> int:
    """N^<d>, the bound on the codimension of a shadow; 0^<d> = 0."""
    return sum(comb(k + 1, i + 1) for k, i in macaulay_rep(N, d).terms)


def kappa0(n: int) -> int:
    """Largest kappa with kappa(kappa+1)/2 < n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    k = (isqrt(8 * n + 1) - 1) // 2
    while k * (k + 1) // 2 >= n:
        k -= 1
    while (k + 1) * (k + 2) // 2 < n:
        k += 1
    return k


@dataclass(frozen=True)
class BandReport:
    n: int
    kappa0: int
    bands: tuple[tuple[int, int], ...]
    threshold: int

    def classify(self, rank: int) -> dict:
        """Place a prolongation rank relative to the conjectured bands.

        Returns ``{"kind": ..., "kappa": ...}`` with kind one of
        ``zero``, ``in-band``, ``above-threshold``, ``in-gap``.
        """
        if rank == 0:
            return {"kind": "zero", "kappa": 0}
        for kappa, (lo, hi) in enumerate(self.bands):
            if kappa > 0 and lo <= rank <= hi:
                return {"kind": "in-band", "kappa": kappa}
        if rank >= self.threshold:
            return {"kind": "above-threshold", "kappa": None}
        return {"kind": "in-gap", "kappa": None}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "kappa0": self.kappa0,
            "bands": [list(b) for b in self.bands],
            "threshold": self.threshold,
        }


def conjecture_bands(n: int) -> BandReport:
    k0 = kappa0(n)
    bands = tuple((k * n - k * (k - 1) // 2, k * n) for k in range(k0 + 1))
    threshold = (k0 + 1) * n - (k0 + 1) * k0 // 2 - 1
    return BandReport(n, k0, bands, threshold)
