"""SOS status of diagonal forms and of their first prolongation.

For a diagonal form, SOS is equivalent to a nonnegative coefficient vector,
and the prolongation is SOS iff J_{n,d} h >= 0.  An inhomogeneous diagonal
polynomial splits into bihomogeneous parts that prolong independently, so
ranks add across degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .combinatorics import conjecture_bands
from .counting import profile, rank
from .prolongation import CoeffVector, apply_list, build_direct


def is_sos_diagonal(h: CoeffVector) -> bool:
    return h.is_nonnegative()


def prolongation_rank(h: CoeffVector) -> Optional[int]:
    """R(J h) when J h >= 0, else None (the prolongation is not SOS)."""
    jh = apply_list(build_direct(h.n, h.d), h.entries)
    if any(v < 0 for v in jh):
        return None
    return rank(jh)


def ghp_bounds(n: int, k: int) -> tuple[int, Optional[int]]:
    """Rank sandwich for the prolongation of a nonnegative vector of rank k."""
    if k <= n - 1:
        return n * k - k * (k - 1) // 2, n * k
    return n * (n + 1) // 2, None


@dataclass
class DegreeEntry:
    degree: int
    is_sos: bool
    prolong_sos: bool
    rank: int
    profile: dict
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "is_sos": self.is_sos,
            "prolong_sos": self.prolong_sos,
            "rank": self.rank,
            "profile": self.profile,
            "flags": self.flags,
        }


@dataclass
class CertReport:
    n: int
    entries: list[DegreeEntry]
    is_sos: bool
    prolong_sos: bool
    total_rank: int
    band: Optional[dict]
    violations: list[str]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [e.to_json() for e in self.entries],
            "totals": {
                "is_sos": self.is_sos,
                "prolong_sos": self.prolong_sos,
                "total_rank": self.total_rank,
            },
            "band": self.band,
            "violations": self.violations,
        }


def certify_form(h: CoeffVector) -> DegreeEntry:
    n, d = h.n, h.d
    jh = apply_list(build_direct(n, d), h.entries)
    sos = h.is_nonnegative()
    psos = all(v >= 0 for v in jh)
    r = rank(jh)
    entry = DegreeEntry(d, sos, psos, r, profile(jh).to_json())
    if not sos and d <= 1:
        # a negative coefficient in degree 0 or 1 always survives one prolongation
        entry.flags.append("low-degree-negative: prolongation can never be SOS")
    if psos and not sos and n >= 2 and d >= 2 and r < 3 * n - 4:
        entry.flags.append(f"VIOLATION: rank {r} < 3n-4 = {3 * n - 4}")
    if sos and n >= 2 and d >= 2:
        lo, hi = ghp_bounds(n, rank(h.entries))
        if r < lo or (hi is not None and r > hi):
            entry.flags.append(f"VIOLATION: nonnegative-vector rank bounds [{lo}, {hi}] fail at {r}")
    return entry


def certify_polynomial(parts: Sequence[CoeffVector]) -> CertReport:
    if not parts:
        raise ValueError("no parts given")
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise ValueError("all parts must share the variable count n")
    degrees = [p.d for p in parts]
    if len(set(degrees)) != len(degrees):
        raise ValueError("at most one part per degree")
    entries = [certify_form(p) for p in sorted(parts, key=lambda p: p.d)]
    is_sos = all(e.is_sos for e in entries)
    psos = all(e.prolong_sos for e in entries)
    total = sum(e.rank for e in entries)
    band = None
    if psos and n >= 2:
        band = conjecture_bands(n).classify(total)
    violations = [f"degree {e.degree}: {f}" for e in entries for f in e.flags if f.startswith("VIOLATION")]
    if psos and not is_sos and n >= 2 and total < 3 * n - 4:
        violations.append(f"total rank {total} < 3n-4 = {3 * n - 4}")
    return CertReport(n, entries, is_sos, psos, total, band, violations)


def parse_polynomial(obj: dict) -> list[CoeffVector]:
    """``{"n": 3, "parts": [{"d": 2, "coeffs": ["1", "-1/2", ...]}]}``

    A single form may also be given flat as ``{"n": 3, "d": 2, "coeffs": [...]}``.
    """
    n = int(obj["n"])
    if "parts" not in obj:
        return [CoeffVector.of(n, int(obj["d"]), obj["coeffs"])]
    return [CoeffVector.of(n, int(p["d"]), p["coeffs"]) for p in obj["parts"]]
