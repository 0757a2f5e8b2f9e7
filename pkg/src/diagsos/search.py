"""Exact R_{n,d}: the least rank of J_{n,d} h over h not >= 0 with J_{n,d} h >= 0.

Lower bounds come from exhausting "is there such an h with at most k nonzero
rows?" for k = 0, 1, 2, ...  Each level is a branch tree over rows of J:

* a node fixes a set Z of rows to zero and a set F of rows assumed nonzero;
* its LP asks for h with J_Z h = 0, J h >= 0 and h_j <= -1 (one tree per
  column j, up to variable permutations);
* an infeasible node closes with a Farkas certificate;
* a feasible node's witness has positive rows S; if |S| > k then any
  solution with at most k nonzero rows vanishes on one of the first
  k - |F| + 1 rows of S \\ F, and the children branch on which one is the
  first zero.

The tree of the last exhausted level is stored in the certificate and can
be replayed without solving a single LP.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .counting import rank
from .exact import fmt, to_rational
from .monomials import index_of, lex_basis
from .prolongation import CoeffVector, apply_list, build_direct
from .ratlp import (FarkasCertificate, LinearSystem, check_certificate, check_witness,
                    homogenize_strict, solve_feasibility)
from . import witnesses

SCHEMA = "diagsos.rnd/1"


class BudgetExceeded(Exception):
    pass


@dataclass
class SearchConfig:
    n: int
    d: int
    initial: Optional[CoeffVector] = None
    symmetry: bool = True
    budget_nodes: Optional[int] = None
    budget_secs: Optional[float] = None
    branch_order: str = "lex"
    use_floors: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.n < 2 or self.d < 2:
            # for d = 1 the x_i^2 coefficient of J h is h_i, so no h qualifies
            raise ValueError("R_{n,d} needs n >= 2 and d >= 2")
        if self.budget_nodes is not None and self.budget_nodes <= 0:
            raise ValueError("node budget must be positive")
        if self.budget_secs is not None and self.budget_secs <= 0:
            raise ValueError("time budget must be positive")
        if self.branch_order != "lex":
            raise ValueError(f"unknown branch order {self.branch_order!r}")
        if self.initial is not None and (self.initial.n, self.initial.d) != (self.n, self.d):
            raise ValueError("initial witness has the wrong shape")

    def echo(self) -> dict:
        return {
            "symmetry": self.symmetry,
            "budget_nodes": self.budget_nodes,
            "budget_secs": self.budget_secs,
            "branch_order": self.branch_order,
            "use_floors": self.use_floors,
        }


def theorem_floor(n: int, d: int) -> int:
    """Lower bounds on R_{n,d} taken from published theorems (used only when asked)."""
    floor = n                      # support of a nonzero form times ||z||^2 is >= n
    if d >= 2:
        floor = max(floor, 3 * n - 4)
    if d == 2 and n >= 6:
        floor = max(floor, (n * n + n) // 2 - 6)
    return floor


def column_orbit_reps(n: int, d: int, symmetry: bool = True) -> list[int]:
    """Lex indices of one column per orbit of the variable permutations."""
    basis = lex_basis(n, d)
    if not symmetry:
        return list(range(len(basis)))
    return sorted({index_of(tuple(sorted(m, reverse=True))) for m in basis})


def node_system(n: int, d: int, j: int, zeros) -> LinearSystem:
    J = build_direct(n, d)
    zs = set(zeros)
    sys = LinearSystem(J.cols)
    for r, cols in enumerate(J.row_cols()):
        a = [0] * J.cols
        for c in cols:
            a[c] = 1
        if r in zs:
            sys.add_eq(a, 0, f"J[{r}]=0")
        else:
            sys.add_ge(a, 0, f"J[{r}]>=0")
    e = [0] * J.cols
    e[j] = -1
    sys.add_gt(e, 0, f"h[{j}]<0")
    return homogenize_strict(sys)


def _positive_rows(J, h) -> list[int]:
    return [r for r, v in enumerate(apply_list(J, h)) if v > 0]


@dataclass
class _Counter:
    nodes: int = 0
    limit: Optional[int] = None
    deadline: Optional[float] = None
    best: Optional[tuple[int, tuple[Fraction, ...]]] = None   # (support, witness)

    def tick(self):
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExceeded("node budget")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget")

    def offer(self, support: int, h):
        if self.best is None or support < self.best[0]:
            self.best = (support, tuple(h))


def _explore(n, d, j, k, zeros, free, counter) -> tuple[dict, Optional[tuple]]:
    """Returns (tree node, solution or None); a solution has at most k nonzero rows."""
    counter.tick()
    res = solve_feasibility(node_system(n, d, j, zeros))
    if not res.feasible:
        return {"y": res.certificate.to_json()}, None
    h = res.witness
    S = _positive_rows(build_direct(n, d), h)
    counter.offer(len(S), h)
    if len(S) <= k:
        return {"w": [fmt(v) for v in h]}, h
    cand = [r for r in S if r not in free]
    children = []
    for i in range(k - len(free) + 1):
        node, sol = _explore(n, d, j, k, zeros | {cand[i]}, free | frozenset(cand[:i]), counter)
        if sol is not None:
            return {"w": [fmt(v) for v in h]}, sol
        children.append(node)
    return {"w": [fmt(v) for v in h], "c": children}, None


def exhaust_level(n: int, d: int, j: int, k: int, counter: Optional[_Counter] = None):
    """Search one branch tree; returns (tree, solution-or-None, counter)."""
    counter = counter or _Counter()
    tree, sol = _explore(n, d, j, k, frozenset(), frozenset(), counter)
    return tree, sol, counter


def _level_job(args):
    n, d, j, k, limit, deadline = args
    counter = _Counter(limit=limit, deadline=deadline)
    try:
        tree, sol, counter = exhaust_level(n, d, j, k, counter)
    except BudgetExceeded:
        return j, None, None, counter.nodes, counter.best, True
    return j, tree, sol, counter.nodes, counter.best, False


@dataclass
class RndCertificate:
    n: int
    d: int
    value: Optional[int]
    lower: int
    upper: Optional[int]
    complete: bool
    witness: Optional[CoeffVector]
    lower_bound_log: dict
    config: dict
    timestamps: dict = field(default_factory=dict)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "n": self.n,
            "d": self.d,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "complete": self.complete,
            "witness": self.witness.strings() if self.witness is not None else None,
            "lower_bound_log": self.lower_bound_log,
            "config": self.config,
        }
        if timing:
            out["timestamps"] = self.timestamps
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "RndCertificate":
        if obj.get("schema") != SCHEMA:
            raise ValueError(f"unknown certificate schema {obj.get('schema')!r}")
        n, d = int(obj["n"]), int(obj["d"])
        w = obj.get("witness")
        return cls(n, d, obj["value"], int(obj["lower"]), obj["upper"], bool(obj["complete"]),
                   CoeffVector.of(n, d, w) if w is not None else None,
                   obj["lower_bound_log"], obj.get("config", {}), obj.get("timestamps", {}))


def seed_witnesses(n: int, d: int) -> list[CoeffVector]:
    """Known non-SOS forms with SOS prolongation, lifted to (n, d).

    A witness h for (n0, d0) with n0 <= n, d0 <= d becomes x_1^(d-d0) h in n
    variables; multiplying by a monomial keeps J h >= 0 and h not >= 0.
    """
    out = []
    for name in ("f", "g"):
        w = witnesses.vector(name)
        if w.n > n or w.d > d:
            continue
        basis0 = lex_basis(w.n, w.d)
        coeffs = [Fraction(0)] * len(lex_basis(n, d))
        for mi, c in zip(basis0, w.entries):
            big = (mi[0] + d - w.d,) + mi[1:] + (0,) * (n - w.n)
            coeffs[index_of(big)] = c
        out.append(CoeffVector(n, d, tuple(coeffs)))
    return out


def _witness_rank(h: CoeffVector) -> Optional[int]:
    jh = apply_list(build_direct(h.n, h.d), h.entries)
    if any(v < 0 for v in jh) or h.is_nonnegative():
        return None
    return rank(jh)


def compute_rnd(config: SearchConfig) -> RndCertificate:
    n, d = config.n, config.d
    started = time.time()
    deadline = time.monotonic() + config.budget_secs if config.budget_secs else None
    reps = column_orbit_reps(n, d, config.symmetry)

    upper, best = None, None
    for h in ([config.initial] if config.initial is not None else []) + seed_witnesses(n, d):
        r = _witness_rank(h)
        if r is not None and (upper is None or r < upper):
            upper, best = r, h

    floor = theorem_floor(n, d) if config.use_floors else 0
    levels = []
    nodes_used = 0
    k = floor
    lower = floor
    final_trees = None
    value = None
    incomplete_reason = None

    max_rows = build_direct(n, d).rows
    while (upper is None or k < upper) and k <= max_rows:
        limit = None if config.budget_nodes is None else config.budget_nodes - nodes_used
        if limit is not None and limit <= 0:
            incomplete_reason = "node budget"
            break
        jobs = [(n, d, j, k, limit, deadline) for j in reps]
        if config.threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=config.threads) as pool:
                results = list(pool.map(_level_job, jobs))
        else:
            results = []
            for job in jobs:
                results.append(_level_job(job))
                if results[-1][5] or results[-1][2] is not None:
                    break
        level_nodes = sum(r[3] for r in results)
        nodes_used += level_nodes
        for _, _, _, _, cand, _ in results:
            if cand is not None and (upper is None or cand[0] < upper):
                upper, best = cand[0], CoeffVector(n, d, cand[1])
        solutions = [(j, sol) for j, _, sol, _, _, _ in results if sol is not None]
        if solutions:
            j, sol = min(solutions, key=lambda t: t[0])
            h = CoeffVector(n, d, sol)
            levels.append({"k": k, "nodes": level_nodes, "result": "found"})
            value, upper, best = k, k, h
            break
        if any(r[5] for r in results):
            levels.append({"k": k, "nodes": level_nodes, "result": "budget"})
            incomplete_reason = "budget"
            break
        levels.append({"k": k, "nodes": level_nodes, "result": "exhausted"})
        final_trees = {str(j): tree for j, tree, _, _, _, _ in results}
        lower = k + 1
        k += 1
    else:
        value = upper

    complete = value is not None
    if complete:
        lower = value
    log = {
        "floor": floor,
        "reps": reps,
        "levels": levels,
        "exhausted_level": lower - 1 if final_trees is not None else None,
        "trees": final_trees,
    }
    if complete and final_trees is None and value > floor:
        # value found at the first searched level; nothing below it to exhaust
        log["exhausted_level"] = None
    cert = RndCertificate(
        n, d, value, lower, upper, complete, best, log,
        {"n": n, "d": d, **config.echo()},
        {"started": started, "finished": time.time(), "seconds": round(time.time() - started, 3),
         "nodes": nodes_used, "incomplete": incomplete_reason},
    )
    return cert


def _replay(n, d, j, k, node, zeros, free, J, stats) -> Optional[str]:
    stats["nodes"] += 1
    sys = node_system(n, d, j, zeros)
    if "y" in node:
        cert = FarkasCertificate.from_json(node["y"], len(sys.eq_rows), len(sys.ge_rows))
        return None if check_certificate(sys, cert) else f"bad Farkas certificate at Z={sorted(zeros)}"
    if "w" not in node:
        return "node has neither witness nor certificate"
    h = [to_rational(v) for v in node["w"]]
    if not check_witness(sys, h):
        return f"node witness violates its system at Z={sorted(zeros)}"
    S = _positive_rows(J, h)
    if len(S) <= k:
        return f"node witness has only {len(S)} nonzero rows (<= {k})"
    cand = [r for r in S if r not in free]
    want = k - len(free) + 1
    children = node.get("c", [])
    if len(children) != want:
        return f"expected {want} children at Z={sorted(zeros)}, found {len(children)}"
    for i, child in enumerate(children):
        err = _replay(n, d, j, k, child, zeros | {cand[i]}, free | frozenset(cand[:i]), J, stats)
        if err:
            return err
    return None


def verify_certificate(cert: RndCertificate, explain: bool = False):
    """Re-check witness and replay the exhaustion log; True iff everything holds."""
    reason = _verify(cert)
    if explain:
        return reason is None, reason
    return reason is None


def _verify(cert: RndCertificate) -> Optional[str]:
    n, d = cert.n, cert.d
    if n < 2 or d < 2:
        return "bad shape"
    log = cert.lower_bound_log or {}
    if cert.complete:
        if cert.value is None or cert.witness is None:
            return "complete certificate without value or witness"
        if (cert.witness.n, cert.witness.d) != (n, d):
            return "witness has the wrong shape"
        if cert.witness.is_nonnegative():
            return "witness is nonnegative, so it is an SOS form"
        jh = apply_list(build_direct(n, d), cert.witness.entries)
        if any(v < 0 for v in jh):
            return "prolongation of the witness has a negative coefficient"
        if rank(jh) != cert.value:
            return f"witness rank {rank(jh)} != claimed value {cert.value}"
        if cert.lower != cert.value or cert.upper != cert.value:
            return "complete certificate must have lower == upper == value"
        claimed_lower = cert.value
    else:
        claimed_lower = cert.lower
        if cert.witness is not None:
            r = _witness_rank(cert.witness)
            if r is None or r != cert.upper:
                return "upper-bound witness does not certify the stated upper bound"

    floor = int(log.get("floor", 0))
    if floor and floor > theorem_floor(n, d):
        return "log claims a floor above the theorem bounds"
    needed = claimed_lower - 1          # every support <= needed must be excluded
    if needed >= floor:
        if log.get("exhausted_level") != needed:
            return f"log exhausts level {log.get('exhausted_level')}, need {needed}"
        trees = log.get("trees") or {}
        reps = column_orbit_reps(n, d, True)
        all_cols = column_orbit_reps(n, d, False)
        keys = sorted(int(j) for j in trees)
        if keys != reps and keys != all_cols:
            return "trees do not cover every column orbit"
        J = build_direct(n, d)
        stats = {"nodes": 0}
        for j in keys:
            err = _replay(n, d, j, needed, trees[str(j)], frozenset(), frozenset(), J, stats)
            if err:
                return f"column {j}: {err}"
    if cert.complete:
        if cert.value < n:
            return f"value {cert.value} below n = {n}"
        if d >= 2 and cert.value < 3 * n - 4:
            return f"value {cert.value} below 3n-4 = {3 * n - 4}"
    return None


def rank1_patch(h_d: CoeffVector) -> Optional[CoeffVector]:
    """A rank-1 delta >= 0 of degree d-1 with J delta >= h_d, when one is known to exist.

    ``h_d`` lives in the n-1 variables x_2..x_n (its own ``n`` is that count).
    Covered cases: one positive coefficient c x^a, giving c x^a / x_i; two
    positive coefficients a x^alpha + b x^beta whose prolongation has rank
    2(n-1) - 1, giving (a + b) x^alpha / x_j where x_i x^alpha = x_j x^beta.
    """
    if not h_d.is_nonnegative():
        raise ValueError("patch vectors are defined for nonnegative h_d")
    m, d = h_d.n, h_d.d
    if d < 1:
        raise ValueError("h_d must have degree >= 1")
    basis = lex_basis(m, d)
    support = [(mi, c) for mi, c in zip(basis, h_d.entries) if c != 0]
    zero = CoeffVector.zero(m, d - 1)
    if not support:
        return zero

    def mono(mi, c):
        coeffs = [Fraction(0)] * len(zero)
        coeffs[index_of(mi)] = c
        return CoeffVector(m, d - 1, tuple(coeffs))

    if len(support) == 1:
        (mi, c), = support
        i = max(k for k, e in enumerate(mi) if e > 0)
        return mono(tuple(e - (k == i) for k, e in enumerate(mi)), c)
    if len(support) == 2:
        r = rank(apply_list(build_direct(m, d), h_d.entries))
        if r != 2 * m - 1:
            return None
        (alpha, a), (beta, b) = support
        diff = [x - y for x, y in zip(alpha, beta)]
        jj = next(k for k, v in enumerate(diff) if v == 1)   # alpha = beta + e_j - e_i
        return mono(tuple(e - (k == jj) for k, e in enumerate(alpha)), a + b)
    return None
