"""Command line entry point: ``diagsos <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 budget-incomplete.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import lemmas, witnesses
from .cache import CacheError, ResultsCache
from .certify import certify_polynomial, parse_polynomial
from .combinatorics import conjecture_bands, macaulay_rep
from .monomials import MonomialSpace, codim, lex_basis, monomial_str, shadow
from .prolongation import CoeffVector, build_direct, build_recursive
from .search import SearchConfig, compute_rnd, theorem_floor, verify_certificate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# values settable from a --config file or a flag; flags win
DEFAULTS = {
    "threads": 1,
    "seed": 0,
    "cache": None,
    "format": None,
    "budget_nodes": None,
    "budget_secs": None,
}
MATRIX_FORMATS = ("triplet", "dense", "json")
CONFIG_TYPES = {"threads": int, "seed": int, "budget_nodes": int, "budget_secs": float}

WITNESS_RANKS = {"f": 5, "g": 8}
KNOWN_VALUES = {(2, 2): 2, (3, 2): 5, (4, 2): 8}
BRACKET_FLOORS = {(5, 2): 11}


class UsageError(Exception):
    pass


def read_config(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_TYPES.get(key, str)(value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}") from None
    return out


def resolve(args):
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, conf.get(key, default))
    allowed = MATRIX_FORMATS if args.command == "matrix" else ("json", "csv")
    if args.format is None:
        args.format = allowed[0]
    if args.format not in allowed:
        raise UsageError(f"--format must be one of {', '.join(allowed)} for {args.command}")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")


def emit(args, payload, rows=None):
    """Print JSON, or CSV when requested and the command has a table."""
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        print(json.dumps(payload, indent=1, sort_keys=True))


def _load_json_arg(value: str):
    if value == "-":
        return json.load(sys.stdin)
    p = Path(value)
    if p.exists():
        return json.loads(p.read_text())
    return json.loads(value)


def open_cache(args):
    if not args.cache:
        return None
    try:
        return ResultsCache(args.cache)
    except CacheError as exc:
        raise UsageError(str(exc)) from None


# ----------------------------------------------------------------- commands

def cmd_matrix(args):
    J = build_direct(args.n, args.d)
    if args.check_recursive and build_recursive(args.n, args.d) != J:
        print("recursive construction disagrees with the direct one", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "dense":
        sys.stdout.write(J.to_dense_text().rstrip("\n") + "\n")
    elif args.format == "triplet":
        sys.stdout.write(J.to_triplet().rstrip("\n") + "\n")
    else:
        emit(args, {"n": J.n, "d": J.d, "rows": J.rows, "cols": J.cols,
                    "entries": [list(e) for e in J.entries]})
    return EXIT_OK


def cmd_basis(args):
    rows = [{"index": i, "exponents": " ".join(map(str, m)), "monomial": monomial_str(m)}
            for i, m in enumerate(lex_basis(args.n, args.d))]
    emit(args, {"n": args.n, "d": args.d,
                "basis": [{"index": i, "exponents": list(m), "monomial": monomial_str(m)}
                          for i, m in enumerate(lex_basis(args.n, args.d))]}, rows)
    return EXIT_OK


def cmd_macaulay(args):
    if args.N < 0 or args.d < 1:
        raise UsageError("need N >= 0 and d >= 1")
    emit(args, macaulay_rep(args.N, args.d).to_json())
    return EXIT_OK


def cmd_shadow(args):
    try:
        space = MonomialSpace.from_json(_load_json_arg(args.space))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad monomial space: {exc}") from None
    sh = shadow(space)
    emit(args, {"space": space.to_json(), "shadow": sh.to_json(),
                "codim": codim(space), "shadow_codim": codim(sh)})
    return EXIT_OK


def cmd_certify(args):
    try:
        parts = parse_polynomial(_load_json_arg(args.input))
        report = certify_polynomial(parts)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad polynomial: {exc}") from None
    emit(args, report.to_json())
    return EXIT_FAIL if report.violations else EXIT_OK


def _summary(cert, source, verified):
    return {
        "n": cert.n, "d": cert.d, "value": cert.value, "lower": cert.lower, "upper": cert.upper,
        "complete": cert.complete, "source": source, "verified": verified,
        "witness": cert.witness.strings() if cert.witness is not None else None,
    }


def obtain_rnd(n, d, args, cache=None):
    """Certificate for (n, d) from the cache or a fresh search.

    Returns (cert or None, source, note).  A cache entry that fails its
    checks yields (None, "cache", reason).
    """
    if cache is not None:
        cert = cache.get(n, d)
        key = cache.key(n, d)
        if key in cache.rejected:
            return None, "cache", f"cache entry rejected: {cache.rejected[key]}"
        if cert is not None and cert.complete:
            return cert, "cache", ""
    config = SearchConfig(n, d, symmetry=not getattr(args, "no_symmetry", False),
                          budget_nodes=args.budget_nodes, budget_secs=args.budget_secs,
                          use_floors=getattr(args, "floors", False), threads=args.threads)
    cert = compute_rnd(config)
    if cache is not None and verify_certificate(cert):
        cache.put(cert)
    return cert, "computed", ""


def cmd_rnd(args):
    if args.n < 2 or args.d < 2:
        raise UsageError("need n >= 2 and d >= 2")
    cache = open_cache(args)
    cert, source, note = obtain_rnd(args.n, args.d, args, cache)
    if cert is None:
        print(note, file=sys.stderr)
        return EXIT_FAIL
    ok, why = verify_certificate(cert, explain=True)
    if args.out:
        Path(args.out).write_text(json.dumps(cert.to_json(timing=False), indent=1, sort_keys=True) + "\n")
    out = _summary(cert, source, ok)
    if why:
        out["reason"] = why
    out["nodes"] = cert.timestamps.get("nodes")
    emit(args, out, [out | {"witness": " ".join(out["witness"] or [])}])
    if not ok:
        return EXIT_FAIL
    return EXIT_OK if cert.complete else EXIT_BUDGET


def cmd_verify_lemmas(args):
    names = list(lemmas.RUNNERS) if args.lemma == "all" else [args.lemma]
    for name in names:
        if name not in lemmas.RUNNERS:
            raise UsageError(f"unknown lemma {name!r}; choose from all, {', '.join(lemmas.RUNNERS)}")
    reports = [lemmas.run(name, args.seed, args.trials, args.n_max) for name in names]
    payload = [r.to_json() for r in reports]
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    rows = [{"lemma": r.lemma, "passed": r.passed, "trials": r.trials, "violations": r.violations,
             "worst_slack": r.worst_slack, "conforming": r.conforming, "seed": r.seed} for r in reports]
    emit(args, payload, rows)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _flip(h: CoeffVector) -> CoeffVector:
    return CoeffVector(h.n, h.d, tuple(-c for c in h.entries))


def cmd_examples(args):
    store = witnesses.load(args.witnesses)
    names = ["f", "g"] if args.name == "all" else [args.name]
    out, ok = [], True
    for name in names:
        try:
            h = witnesses.vector(name, store)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        if args.flip:
            h = _flip(h)
        rep = certify_polynomial([h]).to_json()
        if args.flip:
            passed = not rep["totals"]["prolong_sos"]
        else:
            passed = (rep["totals"]["prolong_sos"] and not rep["totals"]["is_sos"]
                      and rep["totals"]["total_rank"] == WITNESS_RANKS.get(name))
        ok = ok and passed
        out.append({"name": name, "flipped": args.flip, "passed": passed,
                    "coeffs": h.strings(), "report": rep})
    emit(args, out, [{"name": o["name"], "flipped": o["flipped"], "passed": o["passed"],
                      "rank": o["report"]["totals"]["total_rank"],
                      "prolong_sos": o["report"]["totals"]["prolong_sos"]} for o in out])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bands(args):
    lo = args.n if args.n is not None else 2
    hi = args.n if args.n is not None else args.n_max
    if lo < 1 or hi < lo:
        raise UsageError("need 1 <= n")
    reports = [conjecture_bands(n).to_json() for n in range(lo, hi + 1)]
    rows = [{"n": r["n"], "kappa0": r["kappa0"],
             "bands": ";".join(f"{a}-{b}" for a, b in r["bands"]), "threshold": r["threshold"]}
            for r in reports]
    emit(args, reports, rows)
    return EXIT_OK


def _floors(n, d):
    f = 3 * n - 4 if d >= 2 else n
    if d == 2 and n >= 6:
        f = max(f, (n * n + n) // 2 - 6)
    return max(f, n)


def reproduce_rows(args):
    cache = open_cache(args)
    store = witnesses.load(args.witnesses)
    rows = []
    for (n, d) in [(2, 2), (3, 2), (4, 2), (5, 2)]:
        floor = _floors(n, d)
        row = {"row": f"R_{n}{d}", "n": n, "d": d, "value": "", "lower": "", "upper": "",
               "floor": floor, "expected": "", "status": "", "source": "", "note": ""}
        if (n, d) in KNOWN_VALUES:
            row["expected"] = KNOWN_VALUES[(n, d)]
        else:
            row["expected"] = f">={BRACKET_FLOORS[(n, d)]}"
        cert, source, note = obtain_rnd(n, d, args, cache)
        row["source"] = source
        if cert is None:
            row.update(status="fail", note=note)
            rows.append(row)
            continue
        ok, why = verify_certificate(cert, explain=True)
        row.update(value=cert.value if cert.value is not None else "", lower=cert.lower,
                   upper=cert.upper if cert.upper is not None else "")
        if not ok:
            row.update(status="fail", note=f"certificate does not verify: {why}")
        elif cert.complete:
            want = KNOWN_VALUES.get((n, d))
            if cert.value < floor:
                row.update(status="fail", note=f"value below floor {floor}")
            elif want is not None and cert.value != want:
                row.update(status="fail", note=f"expected {want}")
            else:
                row["status"] = "pass"
        else:
            need = BRACKET_FLOORS.get((n, d), floor)
            if cert.lower >= need:
                row.update(status="pass", note="bracket only")
            else:
                row.update(status="incomplete", note=f"budget ran out at lower bound {cert.lower}")
        rows.append(row)
    rows_w = []
    for name, want in WITNESS_RANKS.items():
        row = {"row": f"witness_{name}", "n": "", "d": "", "value": "", "lower": "", "upper": "",
               "floor": "", "expected": want, "status": "", "source": "witness store", "note": ""}
        try:
            h = witnesses.vector(name, store)
            rep = certify_polynomial([h])
        except (KeyError, ValueError, TypeError) as exc:
            row.update(status="fail", note=f"unreadable witness: {exc}")
            rows_w.append(row)
            continue
        row.update(n=h.n, d=h.d, value=rep.total_rank, floor=theorem_floor(h.n, h.d))
        if rep.is_sos or not rep.prolong_sos:
            row.update(status="fail", note="not a non-SOS form with SOS prolongation")
        elif rep.total_rank != want:
            row.update(status="fail", note=f"rank {rep.total_rank} != {want}")
        else:
            row["status"] = "pass"
        rows_w.append(row)
    return rows + rows_w


def cmd_reproduce(args):
    rows = reproduce_rows(args)
    emit(args, rows, rows)
    status = {r["status"] for r in rows}
    if "fail" in status:
        return EXIT_FAIL
    return EXIT_BUDGET if "incomplete" in status else EXIT_OK


# ----------------------------------------------------------------- parser

def _globals(p, suppress):
    kw = {"default": argparse.SUPPRESS} if suppress else {"default": None}
    p.add_argument("--threads", type=int, help="worker processes for searches", **kw)
    p.add_argument("--seed", type=int, help="base RNG seed", **kw)
    p.add_argument("--cache", help="results cache file", **kw)
    p.add_argument("--format", help="json or csv; matrix also takes triplet or dense", **kw)
    p.add_argument("--config", help="key=value config file; flags override it", **kw)


def build_parser():
    p = argparse.ArgumentParser(prog="diagsos", description=__doc__.splitlines()[0])
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        _globals(sp, suppress=True)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("matrix", cmd_matrix, "print J_{n,d}")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--check-recursive", action="store_true")

    sp = add("basis", cmd_basis, "list the lex monomial basis")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)

    sp = add("macaulay", cmd_macaulay, "d-th Macaulay representation of N")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)

    sp = add("shadow", cmd_shadow, "shadow of a monomial space")
    sp.add_argument("--space", required=True, help="JSON, a file path, or - for stdin")

    sp = add("certify", cmd_certify, "certify a diagonal polynomial")
    sp.add_argument("--input", required=True, help="JSON, a file path, or - for stdin")

    sp = add("rnd", cmd_rnd, "compute R_{n,d} with a certificate")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--budget-nodes", type=int, default=None)
    sp.add_argument("--budget-secs", type=float, default=None)
    sp.add_argument("--no-symmetry", action="store_true")
    sp.add_argument("--floors", action="store_true", help="start the search at the known lower bounds")
    sp.add_argument("--out", help="write the full certificate here")

    sp = add("verify-lemmas", cmd_verify_lemmas, "run the seeded verification harness")
    sp.add_argument("--lemma", default="all")
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--out")

    sp = add("examples", cmd_examples, "certify the extremal witnesses")
    sp.add_argument("name", nargs="?", default="all", choices=["f", "g", "all"])
    sp.add_argument("--flip", action="store_true", help="negate the witness (negative control)")
    sp.add_argument("--witnesses", help="JSON witness store overriding the built-in one")

    sp = add("bands", cmd_bands, "conjectured rank bands")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=10)

    sp = add("reproduce", cmd_reproduce, "regenerate the bounds table")
    sp.add_argument("--budget-nodes", type=int, default=None)
    sp.add_argument("--budget-secs", type=float, default=None)
    sp.add_argument("--witnesses", help="JSON witness store overriding the built-in one")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        resolve(args)
        return args.fn(args)
    except UsageError as exc:
        print(f"diagsos: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"diagsos: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
