"""Seeded verification harness for the counting inequalities and rank bounds.

Each ``check_*`` function tests one instance exactly and returns a
``Check``.  The ``run_*`` functions drive exhaustive enumeration where the
instance space is small and seeded random sampling elsewhere, and fold the
results into a ``LemmaReport``.  High-volume random trials use int64 numpy
batches: integer vectors stand in for rational ones up to a positive scale,
which changes no sign pattern, and magnitudes stay far below 2**62.

Random checks are one-sided.  They can find counterexamples; they cannot
prove the statements.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from .combinatorics import macaulay_step
from .counting import negatives, positives, profile, rank, zeros
from .exact import fmt
from .monomials import (MonomialSpace, add, codim, index_of, lex_basis, lex_segment,
                        shadow, unit)
from .prolongation import (CoeffVector, apply_list, build_direct, iterated_list,
                           slack_lists, split_blocks)

INT_GUARD = 2 ** 53

# Zero-count slack constants of the second-prolongation bound, as stated.
_C_TABLE = {2: 1, 3: 2, 4: 4}


def c_const(n: int) -> int:
    if n < 2:
        raise ValueError("defined for n >= 2")
    return _C_TABLE.get(n, 10 - n)


def second_prolongation_bound(n: int, N: int) -> int:
    return comb(n + 1, 3) - n * N + n + c_const(n)


@dataclass
class Check:
    ok: bool
    slack: Optional[int] = None
    detail: dict = field(default_factory=dict)


@dataclass
class LemmaReport:
    lemma: str
    trials: int = 0
    violations: int = 0
    worst_slack: Optional[int] = None
    seed: int = 0
    params: dict = field(default_factory=dict)
    conforming: Optional[int] = None
    counterexamples: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, check: Check, instance=None):
        self.trials += 1
        if check.slack is not None:
            if self.worst_slack is None or check.slack < self.worst_slack:
                self.worst_slack = check.slack
        if not check.ok:
            self.violations += 1
            if len(self.counterexamples) < 5:
                self.counterexamples.append({"instance": instance, **check.detail})

    def merge_batch(self, trials: int, bad: np.ndarray, slack: np.ndarray, make_instance):
        self.trials += trials
        if slack.size:
            s = int(slack.min())
            if self.worst_slack is None or s < self.worst_slack:
                self.worst_slack = s
        idx = np.flatnonzero(bad)
        self.violations += int(idx.size)
        for i in idx[: max(0, 5 - len(self.counterexamples))]:
            self.counterexamples.append(make_instance(int(i)))

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "passed": self.passed,
            "trials": self.trials,
            "violations": self.violations,
            "worst_slack": self.worst_slack,
            "conforming": self.conforming,
            "seed": self.seed,
            "params": self.params,
            "notes": self.notes,
            "counterexamples": self.counterexamples,
            "seconds": round(self.seconds, 3),
        }


def _rng(seed: int, lemma: str, *cell: int) -> np.random.Generator:
    code = sum((i + 1) * ord(ch) for i, ch in enumerate(lemma))
    return np.random.default_rng([seed, code, *cell])


@lru_cache(maxsize=None)
def dense(n: int, d: int) -> np.ndarray:
    return build_direct(n, d).to_dense()


@lru_cache(maxsize=None)
def signed_dense(n: int, d: int, r: int, s: int) -> np.ndarray:
    """Matrix of A -> A * (x_1 + ... + x_r - x_{r+1} - ... - x_{r+s})."""
    rows = {m: i for i, m in enumerate(lex_basis(n, d + 1))}
    M = np.zeros((comb(n + d, d + 1), comb(n + d - 1, d)), dtype=np.int64)
    for c, alpha in enumerate(lex_basis(n, d)):
        for j in range(r + s):
            M[rows[add(alpha, unit(n, j))], c] = 1 if j < r else -1
    return M


def _guard(*arrays):
    for a in arrays:
        if a.size and int(np.abs(a).max()) >= INT_GUARD:
            raise OverflowError("batch magnitudes left the exact int64 range")


def _counts(X: np.ndarray):
    return (X > 0).sum(axis=1), (X < 0).sum(axis=1), (X == 0).sum(axis=1)


def _strs(v) -> list[str]:
    return [fmt(x) for x in v]


# ----------------------------------------------------------------- single checks

def check_first_prolongation(a: Sequence, n: int) -> Check:
    if len(a) != n:
        raise ValueError("vector length must be n")
    pa = profile(a)
    P, N, Z = pa.P, pa.N, pa.Z
    pj = profile(apply_list(build_direct(n, 1), list(a)))
    lo_p = P * (P + 1) // 2 + P * Z
    lo_n = N * (N + 1) // 2 + N * Z
    hi_z = Z * (Z + 1) // 2 + P * N
    ok = pj.P >= lo_p and pj.N >= lo_n and pj.Z <= hi_z
    if P * N == 0:
        ok = ok and pj.P == lo_p and pj.N == lo_n and pj.Z == hi_z
    slack = min(pj.P - lo_p, pj.N - lo_n, hi_z - pj.Z)
    return Check(ok, slack, {"profile": pa.to_json(), "prolonged": pj.to_json()})


def check_second_prolongation(a: Sequence, n: int) -> Check:
    if n < 2 or len(a) != n:
        raise ValueError("need n >= 2 and len(a) == n")
    N = negatives(a)
    if N < 2:
        raise ValueError("the zero bound needs at least two negative entries")
    z = zeros(iterated_list(n, 1, 3, list(a)))
    bound = second_prolongation_bound(n, N)
    return Check(z <= bound, bound - z, {"Z": z, "bound": bound, "N": N})


def check_ghp(h: CoeffVector) -> Check:
    if not h.is_nonnegative():
        raise ValueError("h must be nonnegative")
    n = h.n
    k = rank(h.entries)
    r = rank(apply_list(build_direct(n, h.d), h.entries))
    if k <= n - 1:
        lo, hi = n * k - k * (k - 1) // 2, n * k
        ok = lo <= r <= hi
        slack = min(r - lo, hi - r)
    else:
        lo, hi = n * (n + 1) // 2, None
        ok = r >= lo
        slack = r - lo
    return Check(ok, slack, {"k": k, "rank": r, "bounds": [lo, hi]})


def signed_prolong(h: Sequence, n: int, d: int, r: int, s: int) -> list:
    rows = {m: i for i, m in enumerate(lex_basis(n, d + 1))}
    out = [0] * len(rows)
    for alpha, c in zip(lex_basis(n, d), h):
        if c:
            for j in range(r + s):
                out[rows[add(alpha, unit(n, j))]] += c if j < r else -c
    return out


def check_gao_ng(h: CoeffVector, r: int, s: int) -> Check:
    if h.is_zero():
        raise ValueError("h must be nonzero")
    if not 1 <= r + s <= h.n or r < 0 or s < 0:
        raise ValueError("need 1 <= r + s <= n")
    supp = rank(signed_prolong(h.entries, h.n, h.d, r, s))
    return Check(supp >= r + s, supp - (r + s), {"support": supp, "r": r, "s": s})


def is_lex_segment(space: MonomialSpace) -> bool:
    return space.indices() == list(range(len(space)))


def check_macaulay(space: MonomialSpace) -> Check:
    c0 = codim(space)
    c1 = codim(shadow(space))
    bound = macaulay_step(c0, space.d)
    ok = c1 <= bound
    if is_lex_segment(space):
        ok = ok and c1 == bound
    return Check(ok, bound - c1, {"codim": c0, "shadow_codim": c1, "bound": bound})


def check_structural(h: CoeffVector, certified: Optional[dict] = None) -> Check:
    """Three slack blocks of a degree-2 form are nonzero; optional corollary bound."""
    n = h.n
    if n < 3 or h.d != 2:
        raise ValueError("needs n >= 3 and d = 2")
    jh = apply_list(build_direct(n, 2), h.entries)
    blocks = split_blocks(n, 2, h.entries)
    if any(v < 0 for v in jh) or all(v >= 0 for v in blocks[2]):
        raise ValueError("needs J h >= 0 with the x_1-free block not >= 0")
    gammas, _ = slack_lists(n, 2, h.entries)
    vals = (positives(blocks[1]), rank(gammas[1]), rank(gammas[2]))
    ok = all(v >= 1 for v in vals)
    slack = min(vals) - 1
    detail = {"P(h1)": vals[0], "R(gamma1)": vals[1], "R(gamma2)": vals[2], "rank": rank(jh)}
    prev = (certified or {}).get(n - 1)
    if prev is not None:
        detail["floor"] = 3 + prev
        ok = ok and rank(jh) >= 3 + prev
        slack = min(slack, rank(jh) - 3 - prev)
    return Check(ok, slack, detail)


def check_single_gamma(h: CoeffVector) -> Check:
    """J h >= 0, N(h) >= 1, one nonzero slack block  =>  R(J h) >= C(n+1,3) + 1."""
    n, d = h.n, h.d
    jh = apply_list(build_direct(n, d), h.entries)
    gammas, _ = slack_lists(n, d, h.entries)
    nonzero = [i for i, g in enumerate(gammas) if rank(g)]
    if any(v < 0 for v in jh) or negatives(h.entries) < 1 or len(nonzero) != 1:
        raise ValueError("instance does not meet the hypotheses")
    bound = comb(n + 1, 3) + 1
    r = rank(jh)
    return Check(r >= bound, r - bound, {"rank": r, "bound": bound, "a": nonzero[0]})


def two_term_vector(n: int, d: int, a: int, alpha, ca, b: int, beta, lam) -> list:
    """(-1)^(d-a) J..J ca x^alpha + (-1)^(d-b) J..J lam x^beta, in degree d+1."""
    va = [0] * comb(n + a - 1, a)
    va[index_of(alpha)] = ca
    vb = [0] * comb(n + b - 1, b)
    vb[index_of(beta)] = lam
    pa = iterated_list(n, a, d + 1, va)
    pb = iterated_list(n, b, d + 1, vb)
    sa = 1 if (d - a) % 2 == 0 else -1
    sb = 1 if (d - b) % 2 == 0 else -1
    return [sa * x + sb * y for x, y in zip(pa, pb)]


def check_two_term(v: Sequence, n: int) -> Check:
    if any(x < 0 for x in v):
        raise ValueError("v must be nonnegative")
    bound = comb(n + 2, 3) - 1
    r = rank(v)
    return Check(r >= bound, r - bound, {"rank": r, "bound": bound})


def check_single_negative(h: CoeffVector) -> Check:
    n, d = h.n, h.d
    jh = apply_list(build_direct(n, d), h.entries)
    if negatives(h.entries) != 1 or any(v < 0 for v in jh):
        raise ValueError("needs exactly one negative coefficient and J h >= 0")
    bound = n * (n + 1) // 2 - 1
    r = rank(jh)
    return Check(r >= bound, r - bound, {"rank": r, "bound": bound})


def two_negative_pattern(h: CoeffVector) -> bool:
    n, d = h.n, h.d
    if n < 4 or d < 2:
        return False
    blocks = split_blocks(n, d, h.entries)
    if sum(negatives(blocks[i]) for i in range(1, d - 1)) + negatives(blocks[d]):
        return False
    if positives(blocks[d]) != 2 or negatives(blocks[d - 1]) != 2:
        return False
    return all(v >= 0 for v in apply_list(build_direct(n, d), h.entries))


def check_two_negative(h: CoeffVector) -> Check:
    if not two_negative_pattern(h):
        raise ValueError("instance does not meet the sign pattern")
    n = h.n
    r = rank(apply_list(build_direct(n, h.d), h.entries))
    return Check(r >= 3 * n - 4, r - (3 * n - 4), {"rank": r, "bound": 3 * n - 4})


# ----------------------------------------------------------------- runners

GRID = (Fraction(1), Fraction(1, 2), Fraction(2), Fraction(3))


def _grid_values():
    return [Fraction(0)] + [s * g for g in GRID for s in (1, -1)]


def run_first_prolongation(seed=0, trials=10_000, n_max=7, exhaustive_n=4) -> LemmaReport:
    rep = LemmaReport("first-prolongation", seed=seed,
                      params={"exhaustive_n": [1, exhaustive_n], "grid": [fmt(g) for g in GRID],
                              "random_n": [2, n_max], "trials_per_n": trials})
    values = _grid_values()
    for n in range(1, exhaustive_n + 1):
        for a in itertools.product(values, repeat=n):
            rep.record(check_first_prolongation(a, n), _strs(a))
    exhaustive = rep.trials
    for n in range(2, n_max + 1):
        rng = _rng(seed, rep.lemma, n)
        A = rng.integers(-3, 4, size=(trials, n))
        JA = A @ dense(n, 1).T
        _guard(JA)
        P, N, Z = _counts(A)
        jp, jn, jz = _counts(JA)
        lo_p = P * (P + 1) // 2 + P * Z
        lo_n = N * (N + 1) // 2 + N * Z
        hi_z = Z * (Z + 1) // 2 + P * N
        bad = (jp < lo_p) | (jn < lo_n) | (jz > hi_z)
        eq = (P * N == 0)
        bad |= eq & ((jp != lo_p) | (jn != lo_n) | (jz != hi_z))
        slack = np.minimum(np.minimum(jp - lo_p, jn - lo_n), hi_z - jz)
        rep.merge_batch(trials, bad, slack, lambda i: {"n": n, "a": A[i].tolist()})
    rep.notes["exhaustive_instances"] = exhaustive
    return rep


def _sample_two_negatives(rng, n: int, trials: int) -> np.ndarray:
    A = np.zeros((trials, n), dtype=np.int64)
    for t in range(trials):
        N = int(rng.integers(2, n + 1))
        neg = rng.choice(n, size=N, replace=False)
        row = rng.integers(0, 4, size=n)
        row[neg] = -rng.integers(1, 4, size=N)
        A[t] = row
    return A


def run_second_prolongation(seed=0, trials=10_000, n_max=6, exhaustive_n=4) -> LemmaReport:
    rep = LemmaReport("second-prolongation", seed=seed,
                      params={"random_n": [2, n_max], "trials_per_n": trials,
                              "exhaustive_n": [2, exhaustive_n], "grid": list(range(-3, 4)),
                              "c": {n: c_const(n) for n in range(2, max(n_max, 5) + 1)}})
    worst_by_n = {}
    for n in range(2, exhaustive_n + 1):
        for a in itertools.product(range(-3, 4), repeat=n):
            if negatives(a) >= 2:
                chk = check_second_prolongation(a, n)
                rep.record(chk, {"n": n, "a": list(a)})
                worst_by_n[n] = min(worst_by_n.get(n, chk.slack), chk.slack)
    for n in range(2, n_max + 1):
        rng = _rng(seed, rep.lemma, n)
        A = _sample_two_negatives(rng, n, trials)
        Y = A @ dense(n, 1).T @ dense(n, 2).T
        _guard(Y)
        Z = (Y == 0).sum(axis=1)
        N = (A < 0).sum(axis=1)
        bound = comb(n + 1, 3) - n * N + n + c_const(n)
        slack = bound - Z
        rep.merge_batch(trials, slack < 0, slack, lambda i: {"n": n, "a": A[i].tolist()})
        worst_by_n[n] = min(worst_by_n.get(n, int(slack.min())), int(slack.min()))
    tight = check_second_prolongation([-1, -1], 2)
    rep.notes["n2_all_negative"] = {"Z": tight.detail["Z"], "bound": tight.detail["bound"],
                                    "tight": tight.slack == 0}
    # observed max of Z - L(n, N), to compare against the stated c(n)
    rep.notes["max_excess_over_L"] = {n: c_const(n) - s for n, s in sorted(worst_by_n.items())}
    return rep


def run_ghp(seed=0, trials=1_000, n_range=(2, 5), d_range=(2, 4)) -> LemmaReport:
    rep = LemmaReport("ghp", seed=seed, params={"n": list(n_range), "d": list(d_range),
                                                "trials_per_cell": trials})
    dense_k = 0
    for n in range(n_range[0], n_range[1] + 1):
        for d in range(d_range[0], d_range[1] + 1):
            rng = _rng(seed, rep.lemma, n, d)
            m = comb(n + d - 1, d)
            H = np.zeros((trials, m), dtype=np.int64)
            for t in range(trials):
                u = rng.random()
                if u < 0.5:
                    k = int(rng.integers(0, min(n - 1, m) + 1))
                elif u < 0.8:
                    k = int(rng.integers(min(n, m), m + 1))
                else:
                    k = m
                pos = rng.choice(m, size=k, replace=False)
                H[t, pos] = rng.integers(1, 5, size=k)
            JH = H @ dense(n, d).T
            _guard(JH)
            k = (H != 0).sum(axis=1)
            r = (JH != 0).sum(axis=1)
            small = k <= n - 1
            lo = np.where(small, n * k - k * (k - 1) // 2, n * (n + 1) // 2)
            hi = np.where(small, n * k, np.iinfo(np.int64).max)
            bad = (r < lo) | (r > hi)
            slack = np.where(small, np.minimum(r - lo, hi - r), r - lo)
            dense_k += int((~small).sum())
            rep.merge_batch(trials, bad, slack,
                            lambda i: {"n": n, "d": d, "h": H[i].tolist()})
    rep.notes["instances_with_k_ge_n"] = dense_k
    return rep


def run_gao_ng(seed=0, trials=1_000, n_max=5, d_max=4) -> LemmaReport:
    rep = LemmaReport("gao-ng", seed=seed, params={"n": [1, n_max], "d": [0, d_max],
                                                   "trials_per_cell": trials})
    cells = 0
    for n in range(1, n_max + 1):
        for d in range(0, d_max + 1):
            m = comb(n + d - 1, d)
            for r in range(0, n + 1):
                for s in range(0, n + 1 - r):
                    if r + s == 0:
                        continue
                    cells += 1
                    rng = _rng(seed, rep.lemma, n, d, r, s)
                    H = rng.integers(-3, 4, size=(trials, m))
                    sparse = rng.random((trials, m)) < 0.5
                    H = np.where(sparse & (rng.random((trials, 1)) < 0.5), 0, H)
                    dead = ~(H != 0).any(axis=1)
                    H[dead, rng.integers(0, m, size=int(dead.sum()))] = 1
                    Y = H @ signed_dense(n, d, r, s).T
                    _guard(Y)
                    supp = (Y != 0).sum(axis=1)
                    slack = supp - (r + s)
                    rep.merge_batch(trials, slack < 0, slack,
                                    lambda i: {"n": n, "d": d, "r": r, "s": s, "h": H[i].tolist()})
    rep.notes["cells"] = cells
    return rep


def _all_spaces(n: int, d: int):
    basis = lex_basis(n, d)
    for mask in range(1 << len(basis)):
        yield MonomialSpace(n, d, frozenset(b for i, b in enumerate(basis) if mask >> i & 1))


def run_macaulay(seed=0, trials=10_000, n_max=5, d_max=4) -> LemmaReport:
    exhaustive_cells = [(2, d) for d in range(1, 5)] + [(3, d) for d in range(1, 3)]
    rep = LemmaReport("macaulay", seed=seed,
                      params={"exhaustive": exhaustive_cells, "random_n": [1, n_max],
                              "random_d": [1, d_max], "random_trials": trials})
    exhaustive = 0
    for n, d in exhaustive_cells:
        for sp in _all_spaces(n, d):
            rep.record(check_macaulay(sp), {"n": n, "d": d, "members": [list(m) for m in sp.sorted()]})
            exhaustive += 1
    lex_count = 0
    for n in range(1, n_max + 1):
        for d in range(1, d_max + 1):
            for size in range(comb(n + d - 1, d) + 1):
                rep.record(check_macaulay(lex_segment(n, d, size)), {"n": n, "d": d, "lex": size})
                lex_count += 1
    cells = [(n, d) for n in range(1, n_max + 1) for d in range(1, d_max + 1)]
    per = -(-trials // len(cells))
    for n, d in cells:
        rng = _rng(seed, rep.lemma, n, d)
        basis = lex_basis(n, d)
        J = build_direct(n, d)
        total_next = J.rows
        for _ in range(per):
            p = rng.random()
            mask = rng.random(len(basis)) < p
            chosen = np.flatnonzero(mask)
            c0 = len(basis) - chosen.size
            sh = set()
            for c in chosen:
                sh.update(J.col_rows[c])
            c1 = total_next - len(sh)
            bound = macaulay_step(c0, d)
            lex = chosen.size == 0 or int(chosen[-1]) == chosen.size - 1
            ok = c1 <= bound and (not lex or c1 == bound)
            rep.record(Check(ok, bound - c1), {"n": n, "d": d, "members": chosen.tolist()})
    rep.notes["exhaustive_spaces"] = exhaustive
    rep.notes["lex_segments_checked"] = lex_count
    return rep


def _h_from_gammas(n: int, d: int, gammas: list[np.ndarray]) -> np.ndarray:
    """Invert gamma_0 = h_0, gamma_i = J h_{i-1} + h_i (batched rows)."""
    blocks = [gammas[0]]
    for i in range(1, d + 1):
        blocks.append(gammas[i] - blocks[-1] @ dense(n - 1, i - 1).T)
    return np.concatenate(blocks, axis=1)


def run_block_identity(seed=0, trials=10_000, n_max=5, d_max=4) -> LemmaReport:
    rep = LemmaReport("block-identity", seed=seed,
                      params={"n": [2, n_max], "d": [0, d_max], "trials_per_cell": trials})
    nonneg_cases = 0
    for n in range(2, n_max + 1):
        for d in range(0, d_max + 1):
            rng = _rng(seed, rep.lemma, n, d)
            m = comb(n + d - 1, d)
            half = trials // 2
            H1 = rng.integers(-3, 4, size=(half, m))
            sizes = [comb(n + j - 2, j) for j in range(d + 1)]
            G = [rng.integers(0, 3, size=(trials - half, s)) * (rng.random((trials - half, s)) < 0.4)
                 for s in sizes]
            H2 = _h_from_gammas(n, d, G)
            H = np.concatenate([H1, H2], axis=0)
            JH = H @ dense(n, d).T
            blocks = np.split(H, np.cumsum(sizes)[:-1], axis=1)
            gam = [blocks[0]] + [blocks[i - 1] @ dense(n - 1, i - 1).T + blocks[i]
                                 for i in range(1, d + 1)]
            tail = blocks[d] @ dense(n - 1, d).T
            _guard(JH, tail, *gam)
            lhs = (JH != 0).sum(axis=1)
            rhs = sum((g != 0).sum(axis=1) for g in gam) + (tail != 0).sum(axis=1)
            jh_nonneg = (JH >= 0).all(axis=1)
            crit = np.logical_and.reduce([(g >= 0).all(axis=1) for g in gam] + [(tail >= 0).all(axis=1)])
            bad = (lhs != rhs) | (jh_nonneg != crit)
            nonneg_cases += int(jh_nonneg.sum())
            rep.merge_batch(trials, bad, np.zeros(0, dtype=np.int64),
                            lambda i: {"n": n, "d": d, "h": H[i].tolist()})
    rep.notes["instances_with_Jh_nonneg"] = nonneg_cases
    return rep


# --- constructive samplers (exact) ---------------------------------------------

def _rand_frac(rng, lo=1, hi=4) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, 3)))


def _vec_from_gammas(n: int, d: int, gammas: list[list]) -> list:
    blocks = [list(gammas[0])]
    for i in range(1, d + 1):
        prev = apply_list(build_direct(n - 1, i - 1), blocks[-1])
        blocks.append([g - p for g, p in zip(gammas[i], prev)])
    return [v for b in blocks for v in b]


def sample_single_gamma(rng, n: int, d: int) -> Optional[CoeffVector]:
    choices = list(range(d - 2, -1, -2))
    if not choices:
        return None
    a = int(rng.choice(choices))
    sizes = [comb(n + j - 2, j) for j in range(d + 1)]
    gammas = [[Fraction(0)] * s for s in sizes]
    k = int(rng.integers(1, min(3, sizes[a]) + 1))
    for pos in rng.choice(sizes[a], size=k, replace=False):
        gammas[a][int(pos)] = _rand_frac(rng)
    return CoeffVector(n, d, tuple(_vec_from_gammas(n, d, gammas)))


def run_single_gamma(seed=0, trials=100, n_range=(2, 5), d_range=(2, 4)) -> LemmaReport:
    rep = LemmaReport("single-gamma", seed=seed,
                      params={"n": list(n_range), "d": list(d_range), "trials_per_cell": trials})
    conforming = 0
    for n in range(n_range[0], n_range[1] + 1):
        for d in range(d_range[0], d_range[1] + 1):
            rng = _rng(seed, rep.lemma, n, d)
            for _ in range(trials):
                h = sample_single_gamma(rng, n, d)
                try:
                    chk = check_single_gamma(h)
                except ValueError:
                    continue
                conforming += 1
                rep.record(chk, {"n": n, "d": d, "h": h.strings()})
    rep.conforming = conforming
    return rep


def _rand_monomial(rng, n: int, d: int):
    basis = lex_basis(n, d)
    return basis[int(rng.integers(0, len(basis)))]


def sample_two_term(rng, n: int, d: int):
    a = int(rng.choice(list(range(d - 2, -1, -2))))
    b = int(rng.integers(a + 1, d + 1))
    alpha = _rand_monomial(rng, n, a)
    if rng.random() < 0.7:
        beta = add(alpha, _rand_monomial(rng, n, b - a))
    else:
        beta = _rand_monomial(rng, n, b)
    ca = _rand_frac(rng)
    if (d - b) % 2 == 0:
        lam = _rand_frac(rng)
    else:
        pa = two_term_vector(n, d, a, alpha, ca, b, beta, 0)
        pb = two_term_vector(n, d, a, alpha, 0, b, beta, 1)   # = -J..J x^beta
        ratios = [x / -y for x, y in zip(pa, pb) if y < 0]
        lam_max = min(ratios)
        if lam_max <= 0:
            return None
        lam = lam_max if rng.random() < 0.5 else lam_max * Fraction(int(rng.integers(1, 10)), 10)
    v = two_term_vector(n, d, a, alpha, ca, b, beta, lam)
    return {"a": a, "b": b, "alpha": alpha, "beta": beta, "ca": ca, "lam": lam, "v": v}


def run_two_term(seed=0, trials=100, n_range=(2, 5), d_range=(2, 4)) -> LemmaReport:
    rep = LemmaReport("two-term", seed=seed,
                      params={"n": list(n_range), "d": list(d_range), "trials_per_cell": trials})
    conforming = 0
    for n in range(n_range[0], n_range[1] + 1):
        for d in range(d_range[0], d_range[1] + 1):
            rng = _rng(seed, rep.lemma, n, d)
            made = 0
            attempts = 0
            while made < trials and attempts < 20 * trials:
                attempts += 1
                s = sample_two_term(rng, n, d)
                if s is None or any(x < 0 for x in s["v"]):
                    continue
                made += 1
                conforming += 1
                rep.record(check_two_term(s["v"], n),
                           {"n": n, "d": d, "a": s["a"], "b": s["b"], "alpha": list(s["alpha"]),
                            "beta": list(s["beta"]), "ca": fmt(s["ca"]), "lam": fmt(s["lam"])})
    rep.conforming = conforming
    return rep


def sample_single_negative(rng, n: int, d: int) -> Optional[CoeffVector]:
    basis = lex_basis(n, d)
    mixed = [i for i, m in enumerate(basis) if sum(1 for e in m if e) >= 2]
    if not mixed:
        return None
    j = int(rng.choice(mixed))
    alpha = basis[j]
    coeffs = [Fraction(0)] * len(basis)
    for k in range(n):
        ls = [l for l in range(n) if l != k and alpha[l] > 0]
        l = int(rng.choice(ls))
        mu = tuple(e + (t == k) - (t == l) for t, e in enumerate(alpha))
        coeffs[index_of(mu)] += _rand_frac(rng)
    extra = int(rng.integers(0, 3))
    for pos in rng.choice(len(basis), size=extra, replace=False):
        if int(pos) != j:
            coeffs[int(pos)] += _rand_frac(rng)
    J = build_direct(n, d)
    jh = apply_list(J, coeffs)
    lam_max = min(jh[r] for r in J.col_rows[j])
    if lam_max <= 0:
        return None
    lam = lam_max if rng.random() < 0.6 else lam_max * Fraction(int(rng.integers(1, 10)), 10)
    coeffs[j] = -lam
    return CoeffVector(n, d, tuple(coeffs))


def run_single_negative(seed=0, trials=100, n_range=(2, 5), d_range=(2, 4)) -> LemmaReport:
    rep = LemmaReport("single-negative", seed=seed,
                      params={"n": list(n_range), "d": list(d_range), "trials_per_cell": trials})
    conforming = 0
    for n in range(n_range[0], n_range[1] + 1):
        for d in range(d_range[0], d_range[1] + 1):
            rng = _rng(seed, rep.lemma, n, d)
            for _ in range(trials):
                h = sample_single_negative(rng, n, d)
                if h is None:
                    continue
                try:
                    chk = check_single_negative(h)
                except ValueError:
                    continue
                conforming += 1
                rep.record(chk, {"n": n, "d": d, "h": h.strings()})
    rep.conforming = conforming
    return rep


def sample_two_negative(rng, n: int, d: int) -> Optional[CoeffVector]:
    m = n - 1
    top = lex_basis(m, d - 1)
    if len(top) < 2:
        return None
    Q = [top[int(i)] for i in rng.choice(len(top), size=2, replace=False)]
    q = {mu: _rand_frac(rng) for mu in Q}
    sizes = [comb(m + j - 1, j) for j in range(d + 1)]
    blocks = [[Fraction(0)] * s for s in sizes]
    # h_{d-1} = p - q
    for mu, val in q.items():
        blocks[d - 1][index_of(mu)] = -val
    Jq = build_direct(m, d - 1)
    need = {}
    for mu, val in q.items():
        for r in Jq.col_rows[index_of(mu)]:
            need[r] = need.get(r, 0) + val
    rows_d = lex_basis(m, d)
    qset = set(Q)

    def covers(rho):
        out = []
        for k in range(m):
            if rho[k] > 0:
                mu = tuple(e - (t == k) for t, e in enumerate(rho))
                if mu not in qset:
                    out.append(mu)
        return out

    uncoverable = [r for r in need if not covers(rows_d[r])]
    if len(uncoverable) > 2:
        return None
    hd_pos = set(uncoverable)
    others = [r for r in range(sizes[d]) if r not in hd_pos]
    while len(hd_pos) < 2:
        hd_pos.add(others.pop(int(rng.integers(0, len(others)))))
    for r in hd_pos:
        base = need.get(r, 0)
        blocks[d][r] = base + (0 if rng.random() < 0.5 else _rand_frac(rng)) if base else _rand_frac(rng)
    # cover the remaining deficits of gamma_d with p on non-Q monomials
    for r in sorted(need):
        deficit = need[r] - blocks[d][r] - sum(
            blocks[d - 1][index_of(mu)] for mu in covers(rows_d[r]))
        if deficit > 0:
            opts = covers(rows_d[r])
            mu = opts[int(rng.integers(0, len(opts)))]
            blocks[d - 1][index_of(mu)] += deficit * (1 if rng.random() < 0.6 else Fraction(3, 2))
    # gamma_{d-1}: J h_{d-2} must dominate q on Q
    if d - 2 == 0:
        blocks[0][0] = max(q.values()) * (1 if rng.random() < 0.6 else 2)
    else:
        Jl = build_direct(m, d - 2)
        for mu, val in q.items():
            have = sum(blocks[d - 2][c] for c in range(sizes[d - 2])
                       if index_of(mu) in Jl.col_rows[c])
            if have < val:
                k = int(rng.choice([t for t in range(m) if mu[t] > 0]))
                nu = tuple(e - (t == k) for t, e in enumerate(mu))
                blocks[d - 2][index_of(nu)] += val - have
    for i in range(0, d - 2):
        if rng.random() < 0.5:
            blocks[i][int(rng.integers(0, sizes[i]))] += _rand_frac(rng)
    return CoeffVector(n, d, tuple(v for b in blocks for v in b))


def run_two_negative(seed=0, trials=300, n_range=(4, 5), d_range=(2, 4)) -> LemmaReport:
    rep = LemmaReport("two-negative", seed=seed,
                      params={"n": list(n_range), "d": list(d_range), "trials_per_cell": trials})
    conforming = 0
    for n in range(n_range[0], n_range[1] + 1):
        for d in range(d_range[0], d_range[1] + 1):
            rng = _rng(seed, rep.lemma, n, d)
            made = attempts = 0
            while made < trials and attempts < 20 * trials:
                attempts += 1
                h = sample_two_negative(rng, n, d)
                if h is None or not two_negative_pattern(h):
                    continue
                made += 1
                conforming += 1
                rep.record(check_two_negative(h), {"n": n, "d": d, "h": h.strings()})
    rep.conforming = conforming
    return rep


@lru_cache(maxsize=None)
def certified_rn2(n: int) -> int:
    from .search import SearchConfig, compute_rnd, verify_certificate
    cert = compute_rnd(SearchConfig(n, 2))
    if not (cert.complete and verify_certificate(cert)):
        raise RuntimeError(f"could not certify R_{{{n},2}}")
    return cert.value


def sample_structural(rng, n: int, pool_size: int = 12) -> dict[int, list]:
    """Points of {J h >= 0, some x_1-free coefficient <= -1} from random LP faces."""
    from .search import node_system
    from .ratlp import solve_feasibility
    J = build_direct(n, 2)
    cols = list(range(n, J.cols))      # skip blocks h_0 (size 1) and h_1 (size n-1)
    pools: dict[int, list] = {}
    for _ in range(pool_size):
        j = int(rng.choice(cols))
        zs = set(int(r) for r in rng.choice(J.rows, size=int(rng.integers(0, J.rows // 2)), replace=False))
        res = solve_feasibility(node_system(n, 2, j, zs))
        if res.feasible:
            pools.setdefault(j, []).append(res.witness)
    return pools


def run_structural(seed=0, trials=200, n_range=(3, 5), certified: Optional[dict] = None) -> LemmaReport:
    rep = LemmaReport("structural", seed=seed,
                      params={"n": list(n_range), "trials_per_n": trials})
    if certified is None:
        certified = {n - 1: certified_rn2(n - 1) for n in range(n_range[0], n_range[1] + 1)}
    rep.notes["certified"] = dict(certified)
    conforming = 0
    for n in range(n_range[0], n_range[1] + 1):
        rng = _rng(seed, rep.lemma, n)
        pools = sample_structural(rng, n, pool_size=40)
        keys = sorted(pools)
        if not keys:
            continue
        for _ in range(trials):
            j = keys[int(rng.integers(0, len(keys)))]
            ws = pools[j]
            k = int(rng.integers(1, min(3, len(ws)) + 1))
            picks = rng.choice(len(ws), size=k, replace=False)
            h = [Fraction(0)] * len(ws[0])
            for p in picks:
                lam = Fraction(int(rng.integers(1, 4)))
                h = [x + lam * y for x, y in zip(h, ws[int(p)])]
            cv = CoeffVector(n, 2, tuple(h))
            try:
                chk = check_structural(cv, certified)
            except ValueError:
                continue
            conforming += 1
            rep.record(chk, {"n": n, "h": cv.strings()})
    rep.conforming = conforming
    return rep


RUNNERS: dict[str, Callable[..., LemmaReport]] = {
    "first-prolongation": run_first_prolongation,
    "second-prolongation": run_second_prolongation,
    "ghp": run_ghp,
    "gao-ng": run_gao_ng,
    "macaulay": run_macaulay,
    "block-identity": run_block_identity,
    "single-gamma": run_single_gamma,
    "two-term": run_two_term,
    "single-negative": run_single_negative,
    "two-negative": run_two_negative,
    "structural": run_structural,
}


def run(lemma: str, seed: int = 0, trials: Optional[int] = None, n_max: Optional[int] = None) -> LemmaReport:
    """Run one check family; ``trials``/``n_max`` override the defaults."""
    if lemma not in RUNNERS:
        raise KeyError(f"unknown lemma {lemma!r}; choose from {sorted(RUNNERS)}")
    kwargs: dict = {"seed": seed}
    if trials is not None:
        kwargs["trials"] = trials
    if n_max is not None:
        if lemma in ("first-prolongation", "second-prolongation", "gao-ng", "macaulay", "block-identity"):
            kwargs["n_max"] = n_max
        elif lemma == "two-negative":
            kwargs["n_range"] = (4, max(4, n_max))
        elif lemma == "structural":
            kwargs["n_range"] = (3, max(3, n_max))
        else:
            kwargs["n_range"] = (2, n_max)
    t0 = time.perf_counter()
    rep = RUNNERS[lemma](**kwargs)
    rep.seconds = time.perf_counter() - t0
    return rep


def run_all(seed: int = 0, trials: Optional[int] = None, n_max: Optional[int] = None) -> list[LemmaReport]:
    return [run(name, seed, trials, n_max) for name in RUNNERS]
