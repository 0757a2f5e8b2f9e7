"""Sign counts (P, N, Z) and rank of exact vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class CountingProfile:
    P: int
    N: int
    Z: int

    @property
    def R(self) -> int:
        return self.P + self.N

    def __len__(self):
        return self.P + self.N + self.Z

    def to_json(self) -> dict:
        return {"P": self.P, "N": self.N, "Z": self.Z, "R": self.R}


def profile(v: Iterable) -> CountingProfile:
    p = neg = z = 0
    for x in v:
        if x > 0:
            p += 1
        elif x < 0:
            neg += 1
        else:
            z += 1
    return CountingProfile(p, neg, z)


def rank(v: Iterable) -> int:
    return sum(1 for x in v if x != 0)


def positives(v: Iterable) -> int:
    return sum(1 for x in v if x > 0)


def negatives(v: Iterable) -> int:
    return sum(1 for x in v if x < 0)


def zeros(v: Iterable) -> int:
    return sum(1 for x in v if x == 0)
