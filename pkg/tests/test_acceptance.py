"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import json
import time
from math import comb

import oracles
from conftest import _CERTS, record_criterion
from diagsos import lemmas as L
from diagsos.certify import certify_polynomial
from diagsos.cli import main
from diagsos.prolongation import build_direct, build_recursive, prolong
from diagsos.search import SearchConfig, compute_rnd, verify_certificate
from diagsos.witnesses import vector


def _timed_rnd(n, d, **kw):
    t0 = time.perf_counter()
    cert = compute_rnd(SearchConfig(n, d, **kw))
    secs = time.perf_counter() - t0
    _CERTS.setdefault((n, d, tuple(sorted(kw.items()))), cert)
    return cert, secs


def test_criterion_01_matrix_structure():
    build_direct.cache_clear()
    build_recursive.cache_clear()
    t0 = time.perf_counter()
    cells, problems = 0, []
    for n in range(2, 9):
        for d in range(1, 9):
            if comb(n + d, d + 1) > 10 ** 5:
                continue
            cells += 1
            J, R = build_direct(n, d), build_recursive(n, d)
            if R.entries != J.entries:
                problems.append((n, d, "recursive"))
            if (J.rows, J.cols) != (comb(n + d, d + 1), comb(n + d - 1, d)):
                problems.append((n, d, "shape"))
            if any(len(rs) != n for rs in J.col_rows):
                problems.append((n, d, "column sums"))
            row_nnz = [0] * J.rows
            for r, _ in J.entries:
                row_nnz[r] += 1
            if min(row_nnz) < 1 or max(row_nnz) > n:
                problems.append((n, d, "row counts"))
    secs = time.perf_counter() - t0
    ok = not problems and secs < 10
    record_criterion(1, ok, f"{cells} cells, {secs:.2f}s, problems={problems[:3]}")
    assert ok


def test_criterion_02_extremal_witnesses():
    t0 = time.perf_counter()
    f, g = vector("f"), vector("g")
    jf = [int(v) for v in prolong(f).entries]
    rf, rg = certify_polynomial([f]), certify_polynomial([g])
    secs = time.perf_counter() - t0
    ok = (jf == [1, 0, 3, 0, 0, 3, 1, 0, 0, 1] and rf.total_rank == 5 and not f.is_nonnegative()
          and rf.prolong_sos and rg.total_rank == 8 and rg.prolong_sos and secs < 1)
    record_criterion(2, ok, f"Jf={jf}, ranks=({rf.total_rank},{rg.total_rank}), {secs:.3f}s")
    assert ok


def test_criterion_03_exact_values():
    limits = {(2, 2): (2, 1), (3, 2): (5, 60), (4, 2): (8, 1800)}
    parts, ok = [], True
    for (n, d), (want, limit) in limits.items():
        cert, secs = _timed_rnd(n, d)
        good = cert.complete and cert.value == want and verify_certificate(cert) and secs < limit
        ok = ok and good
        parts.append(f"R_{n}{d}={cert.value} in {secs:.2f}s")
    for n, d in [(2, 2), (3, 2)]:
        best, _ = oracles.brute_rnd(n, d)
        same = best == limits[(n, d)][0]
        ok = ok and same
        parts.append(f"oracle({n},{d})={best}")
    record_criterion(3, ok, "; ".join(parts))
    assert ok


def test_criterion_04_floors_and_bracket():
    cert, secs = _timed_rnd(5, 2, budget_secs=3600)
    verified = verify_certificate(cert)
    bracket_ok = verified and cert.lower >= 11
    floor_ok = True
    for (n, d, _), c in list(_CERTS.items()):
        if c.complete:
            floor_ok = floor_ok and c.value >= 3 * n - 4
            if d == 2 and n >= 6:
                floor_ok = floor_ok and c.value >= (n * n + n) // 2 - 6
    ok = bracket_ok and floor_ok
    record_criterion(4, ok, f"(5,2): lower={cert.lower} upper={cert.upper} complete={cert.complete} "
                            f"verified={verified} in {secs:.1f}s; floors hold={floor_ok}")
    assert ok


def _lemma(number, name, extra_ok=lambda r: True, describe=lambda r: ""):
    rep = L.run(name, seed=0)
    ok = rep.passed and extra_ok(rep)
    record_criterion(number, ok, f"{name}: trials={rep.trials} violations={rep.violations} "
                                 f"worst_slack={rep.worst_slack} {describe(rep)}({rep.seconds:.1f}s)")
    assert ok, rep.counterexamples
    return rep


def test_criterion_05_first_prolongation():
    # 9^1 + 9^2 + 9^3 + 9^4 grid vectors plus 6 * 10^4 random ones
    _lemma(5, "first-prolongation", lambda r: r.trials >= 7380 + 60000,
           lambda r: f"exhaustive={r.notes['exhaustive_instances']} ")


def test_criterion_06_second_prolongation():
    _lemma(6, "second-prolongation",
           lambda r: r.trials >= 50000 and r.notes["n2_all_negative"]["tight"],
           lambda r: f"n2_tight={r.notes['n2_all_negative']['tight']} "
                     f"max_excess={r.notes['max_excess_over_L']} ")


def test_criterion_07_ghp():
    _lemma(7, "ghp", lambda r: r.trials >= 12000 and r.notes["instances_with_k_ge_n"] > 0,
           lambda r: f"k>=n instances={r.notes['instances_with_k_ge_n']} ")


def test_criterion_08_gao_ng():
    _lemma(8, "gao-ng", lambda r: r.trials >= 1000 * r.notes["cells"],
           lambda r: f"cells={r.notes['cells']} ")


def test_criterion_09_macaulay():
    # every subset of the (2,1..4) and (3,1..2) bases: 4+8+16+32+8+64 spaces
    _lemma(9, "macaulay",
           lambda r: r.notes["exhaustive_spaces"] == 132 and r.trials >= 132 + 10000,
           lambda r: f"exhaustive={r.notes['exhaustive_spaces']} lex segments={r.notes['lex_segments_checked']} ")


def test_criterion_10_block_identities():
    _lemma(10, "block-identity", lambda r: r.trials >= 10000 * 4 * 5,
           lambda r: f"Jh>=0 instances={r.notes['instances_with_Jh_nonneg']} ")


def test_criterion_11_constructive_samplers():
    parts, ok = [], True
    for name in ("single-gamma", "two-term", "single-negative", "two-negative"):
        rep = L.run(name, seed=0)
        good = rep.passed and rep.conforming >= 1000
        ok = ok and good
        parts.append(f"{name}: conforming={rep.conforming} violations={rep.violations}")
    record_criterion(11, ok, "; ".join(parts))
    assert ok


def test_criterion_12_reproduce(tmp_path, capsys):
    cache = tmp_path / "cache.json"
    t0 = time.perf_counter()
    code = main(["--cache", str(cache), "reproduce"])
    rows = json.loads(capsys.readouterr().out)
    secs = time.perf_counter() - t0
    names = [r["row"] for r in rows]
    clean = (code == 0 and names == ["R_22", "R_32", "R_42", "R_52", "witness_f", "witness_g"]
             and all(r["status"] == "pass" for r in rows))
    store = {"f": {"n": 3, "d": 2, "coeffs": ["1", "-1", "2", "1", "-1", "1"]},
             "g": {"n": 4, "d": 2, "coeffs": ["1", "-1", "-1", "2", "1", "2", "-1", "1", "-1", "1"]}}
    flipped = {}
    for name in store:
        bad = json.loads(json.dumps(store))
        bad[name]["coeffs"][0] = "-1"
        path = tmp_path / f"w_{name}.json"
        path.write_text(json.dumps(bad))
        code_t = main(["--cache", str(cache), "reproduce", "--witnesses", str(path)])
        out = {r["row"]: r["status"] for r in json.loads(capsys.readouterr().out)}
        flipped[name] = code_t == 1 and out[f"witness_{name}"] == "fail"
    ok = clean and all(flipped.values())
    record_criterion(12, ok, f"clean exit={code} rows={[(r['row'], r['status']) for r in rows]} "
                             f"tamper flips={flipped} ({secs:.1f}s)")
    assert ok
