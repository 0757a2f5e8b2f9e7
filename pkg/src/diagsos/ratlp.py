"""Exact rational feasibility for systems of equalities and inequalities.

Variables are free reals.  ``solve_feasibility`` returns either a witness
that satisfies every row exactly or Farkas multipliers that combine the rows
into ``0 >= positive``.  Both outcomes can be re-checked independently with
``check_witness`` / ``check_certificate``.

The solver eliminates the free variables by fraction-free Gauss-Jordan
elimination and runs a Phase I simplex with Bland's rule on the remaining
slack system.  All tableau arithmetic is on Python ints (Bareiss updates,
exact division by the previous pivot), so there is no floating point and no
fixed-width overflow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import fmt, integerize, to_rational

Row = tuple[tuple[Fraction, ...], Fraction]


class InfeasibleCertificateError(ValueError):
    pass


@dataclass
class LinearSystem:
    """``eq_rows``: a.x = b, ``ge_rows``: a.x >= b, ``gt_rows``: a.x > b.

    Strict rows never reach the solver; use ``homogenize_strict`` first.
    """

    m: int
    eq_rows: list[Row] = field(default_factory=list)
    ge_rows: list[Row] = field(default_factory=list)
    gt_rows: list[Row] = field(default_factory=list)
    eq_tags: list[str] = field(default_factory=list)
    ge_tags: list[str] = field(default_factory=list)
    gt_tags: list[str] = field(default_factory=list)

    def __post_init__(self):
        for kind in ("eq", "ge", "gt"):
            rows = getattr(self, f"{kind}_rows")
            canon = []
            for a, b in rows:
                a = tuple(to_rational(v) for v in a)
                if len(a) != self.m:
                    raise ValueError(f"{kind} row has {len(a)} coefficients, expected {self.m}")
                canon.append((a, to_rational(b)))
            setattr(self, f"{kind}_rows", canon)
            tags = getattr(self, f"{kind}_tags")
            if tags and len(tags) != len(canon):
                raise ValueError(f"{kind}_tags length mismatch")

    def add_eq(self, a, b=0, tag: str = ""):
        self.eq_rows.append((tuple(to_rational(v) for v in a), to_rational(b)))
        self.eq_tags.append(tag)

    def add_ge(self, a, b=0, tag: str = ""):
        self.ge_rows.append((tuple(to_rational(v) for v in a), to_rational(b)))
        self.ge_tags.append(tag)

    def add_gt(self, a, b=0, tag: str = ""):
        self.gt_rows.append((tuple(to_rational(v) for v in a), to_rational(b)))
        self.gt_tags.append(tag)

    def to_json(self) -> dict:
        def rows(rs):
            return [{"a": [fmt(v) for v in a], "b": fmt(b)} for a, b in rs]
        return {
            "m": self.m,
            "eq": rows(self.eq_rows), "ge": rows(self.ge_rows), "gt": rows(self.gt_rows),
            "eq_tags": self.eq_tags, "ge_tags": self.ge_tags, "gt_tags": self.gt_tags,
        }

    def dumps(self) -> str:
        """JSON debug dump for reproducing a solve."""
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> "LinearSystem":
        def rows(rs):
            return [(tuple(r["a"]), r["b"]) for r in rs]
        return cls(obj["m"], rows(obj.get("eq", [])), rows(obj.get("ge", [])), rows(obj.get("gt", [])),
                   list(obj.get("eq_tags", [])), list(obj.get("ge_tags", [])), list(obj.get("gt_tags", [])))


@dataclass(frozen=True)
class FarkasCertificate:
    """Integer multipliers: y_eq free in sign, y_ge >= 0, with
    sum y_i a_i = 0 and sum y_i b_i > 0."""

    eq: tuple[int, ...]
    ge: tuple[int, ...]

    def to_json(self) -> dict:
        return {"eq": {str(i): v for i, v in enumerate(self.eq) if v},
                "ge": {str(i): v for i, v in enumerate(self.ge) if v}}

    @classmethod
    def from_json(cls, obj: dict, n_eq: int, n_ge: int) -> "FarkasCertificate":
        eq = [0] * n_eq
        ge = [0] * n_ge
        for k, v in obj.get("eq", {}).items():
            eq[int(k)] = int(v)
        for k, v in obj.get("ge", {}).items():
            ge[int(k)] = int(v)
        return cls(tuple(eq), tuple(ge))


@dataclass(frozen=True)
class FeasResult:
    witness: Optional[tuple[Fraction, ...]] = None
    certificate: Optional[FarkasCertificate] = None

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def homogenize_strict(sys: LinearSystem) -> LinearSystem:
    """Replace each strict row a.x > 0 by a.x >= 1.

    Valid because the solution set of a homogeneous system is a cone: any
    point with a.x > 0 can be scaled until a.x >= 1.
    """
    for kind in ("eq", "ge", "gt"):
        if any(b != 0 for _, b in getattr(sys, f"{kind}_rows")):
            raise ValueError("homogenize_strict needs a homogeneous system (all right-hand sides zero)")
    out = LinearSystem(sys.m, list(sys.eq_rows), list(sys.ge_rows), [],
                       list(sys.eq_tags), list(sys.ge_tags), [])
    gt_tags = sys.gt_tags or [""] * len(sys.gt_rows)
    if not out.ge_tags and sys.ge_rows:
        out.ge_tags = [""] * len(sys.ge_rows)
    for (a, _), tag in zip(sys.gt_rows, gt_tags):
        out.add_ge(a, 1, tag)
    if not any(out.ge_tags):
        out.ge_tags = []
    if not any(out.eq_tags):
        out.eq_tags = []
    return out


def _dot(a, x):
    return sum((ai * xi for ai, xi in zip(a, x) if ai), Fraction(0))


def check_witness(sys: LinearSystem, x: Sequence) -> bool:
    x = [to_rational(v) for v in x]
    if len(x) != sys.m:
        return False
    return (all(_dot(a, x) == b for a, b in sys.eq_rows)
            and all(_dot(a, x) >= b for a, b in sys.ge_rows)
            and all(_dot(a, x) > b for a, b in sys.gt_rows))


def check_certificate(sys: LinearSystem, cert: FarkasCertificate) -> bool:
    if sys.gt_rows:
        return False
    if len(cert.eq) != len(sys.eq_rows) or len(cert.ge) != len(sys.ge_rows):
        return False
    if any(y < 0 for y in cert.ge):
        return False
    combo = [Fraction(0)] * sys.m
    rhs = Fraction(0)
    for y, (a, b) in list(zip(cert.eq, sys.eq_rows)) + list(zip(cert.ge, sys.ge_rows)):
        if y:
            for k, v in enumerate(a):
                if v:
                    combo[k] += y * v
            rhs += y * b
    return all(v == 0 for v in combo) and rhs > 0


def _pivot(T: list[list[int]], r: int, c: int, D: int) -> int:
    """Bareiss pivot on (r, c); returns the new common denominator."""
    pr = T[r]
    p = pr[c]
    cols = range(len(pr))
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            T[i] = [(p * row[k] - f * pr[k]) // D for k in cols]
        elif p != D:
            T[i] = [(p * v) // D for v in row]
    return p


def solve_feasibility(sys: LinearSystem) -> FeasResult:
    if sys.gt_rows:
        raise ValueError("strict rows present; call homogenize_strict first")
    m = sys.m
    n_eq, n_ge = len(sys.eq_rows), len(sys.ge_rows)
    if n_eq + n_ge == 0:
        return FeasResult(witness=(Fraction(0),) * m)

    # rows: [x (m) | slack (n_ge) | eq tracking (n_eq) | rhs]
    width = m + n_ge + n_eq + 1
    T: list[list[int]] = []
    for e, (a, b) in enumerate(sys.eq_rows):
        ints = integerize(list(a) + [b])
        row = ints[:m] + [0] * n_ge + [0] * n_eq + [ints[m]]
        row[m + n_ge + e] = 1 if any(ints) else 0
        T.append(row)
    for g, (a, b) in enumerate(sys.ge_rows):
        ints = integerize(list(a) + [b])
        if not any(ints):
            ints = [0] * (m + 1)
        row = ints[:m] + [0] * n_ge + [0] * n_eq + [ints[m]]
        row[m + g] = -1
        T.append(row)
    # integerize scaled each row by a positive factor; remember it for the multipliers
    scale_eq = []
    for a, b in sys.eq_rows:
        scale_eq.append(_row_scale(a, b))
    scale_ge = []
    for a, b in sys.ge_rows:
        scale_ge.append(_row_scale(a, b))

    # Gauss-Jordan on the free columns
    D = 1
    pivot_rows: dict[int, int] = {}   # x column -> row
    used = set()
    for c in range(m):
        r = next((i for i in range(len(T)) if i not in used and T[i][c] != 0), None)
        if r is None:
            continue
        D = _pivot(T, r, c, D)
        pivot_rows[c] = r
        used.add(r)

    rest = [i for i in range(len(T)) if i not in used]
    # multipliers of each remaining integer row in terms of the integerized input rows
    slack0, track0 = m, m + n_ge
    phase = []
    for i in rest:
        row = T[i]
        sign = -1 if row[-1] < 0 else 1
        phase.append((i, sign))

    k = len(phase)
    nvar = n_ge
    # Phase I tableau: [slack (n_ge) | artificial (k) | rhs], plus objective row last
    P = []
    for j, (i, sign) in enumerate(phase):
        row = [sign * v for v in T[i][slack0:slack0 + n_ge]] + [0] * k + [sign * T[i][-1]]
        row[nvar + j] = 1
        P.append(row)
    # rows above carry an implicit denominator of 1 after this rescaling
    obj = [0] * (nvar + k + 1)
    for row in P:
        for col in range(nvar):
            obj[col] -= row[col]
        obj[-1] -= row[-1]
    P.append(obj)
    basis = [nvar + j for j in range(k)]
    Dp = 1

    while True:
        # entering: lowest-index slack with negative reduced cost (Bland)
        enter = None
        for col in range(nvar):
            v = P[-1][col]
            if v != 0 and (v < 0) == (Dp > 0):
                enter = col
                break
        if enter is None:
            break
        leave, best = None, None
        for r in range(k):
            a = P[r][enter]
            if a != 0 and (a > 0) == (Dp > 0):
                ratio = Fraction(P[r][-1], a)
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    leave, best = r, ratio
        if leave is None:
            # cannot happen in Phase I (objective bounded below by 0)
            raise RuntimeError("unbounded Phase I")
        Dp = _pivot(P, leave, enter, Dp)
        basis[leave] = enter

    value = Fraction(P[-1][-1], Dp)   # = -(sum of artificials)
    if value != 0:
        # y_j = 1 - reduced cost of artificial j
        ys = [1 - Fraction(P[-1][nvar + j], Dp) for j in range(k)]
        eq_mult = [Fraction(0)] * n_eq
        ge_mult = [Fraction(0)] * n_ge
        for (i, sign), y in zip(phase, ys):
            if not y:
                continue
            row = T[i]
            for g in range(n_ge):
                if row[slack0 + g]:
                    ge_mult[g] += y * sign * (-row[slack0 + g])
            for e in range(n_eq):
                if row[track0 + e]:
                    eq_mult[e] += y * sign * row[track0 + e]
        # undo the per-row integer scaling
        eq_mult = [v * s for v, s in zip(eq_mult, scale_eq)]
        ge_mult = [v * s for v, s in zip(ge_mult, scale_ge)]
        ints = integerize(eq_mult + ge_mult)
        cert = FarkasCertificate(tuple(ints[:n_eq]), tuple(ints[n_eq:]))
        if not check_certificate(sys, cert):
            raise InfeasibleCertificateError("internal error: Farkas certificate failed verification")
        return FeasResult(certificate=cert)

    s = [Fraction(0)] * n_ge
    for r in range(k):
        if basis[r] < nvar:
            s[basis[r]] = Fraction(P[r][-1], P[r][basis[r]])
    x = [Fraction(0)] * m
    for c, r in pivot_rows.items():
        row = T[r]
        acc = Fraction(row[-1])
        for g in range(n_ge):
            if row[slack0 + g] and s[g]:
                acc -= row[slack0 + g] * s[g]
        x[c] = acc / row[c]
    x = tuple(x)
    if not check_witness(sys, x):
        raise RuntimeError("internal error: witness failed verification")
    return FeasResult(witness=x)


def _row_scale(a, b) -> Fraction:
    """Positive factor t with integerize(a + [b]) == t * (a + [b])."""
    vals = list(a) + [b]
    ints = integerize(vals)
    for q, v in zip(vals, ints):
        if q:
            return Fraction(v) / q
    return Fraction(1)
