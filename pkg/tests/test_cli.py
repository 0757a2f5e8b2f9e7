import json

import pytest

from conftest import certificate
from diagsos.cache import ResultsCache
from diagsos.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_matrix_triplet_and_dense(capsys):
    code, out, _ = run(capsys, "matrix", "--n", "2", "--d", "1", "--check-recursive")
    assert code == 0 and out.splitlines() == ["3 2 4", "0 0 1", "1 0 1", "1 1 1", "2 1 1"]
    code, out, _ = run(capsys, "matrix", "--n", "2", "--d", "1", "--format", "dense")
    assert out.splitlines() == ["1 0", "1 1", "0 1"]
    code, _, _ = run(capsys, "matrix", "--n", "2", "--d", "1", "--format", "csv")
    assert code == 2


def test_basis_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "basis", "--n", "3", "--d", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "index,exponents,monomial" and len(lines) == 7


def test_macaulay(capsys):
    code, out, _ = run(capsys, "macaulay", "--N", "5", "--d", "2")
    js = json.loads(out)
    assert code == 0 and js["terms"] == [[3, 2], [2, 1]] and js["step"] == 7


def test_shadow(capsys):
    code, out, _ = run(capsys, "shadow", "--space", "[[2,0,0]]")
    js = json.loads(out)
    assert code == 0 and js["codim"] == 5 and js["shadow_codim"] == 7
    code, _, err = run(capsys, "shadow", "--space", "[[2,0,0],[1,0]]")
    assert code == 2 and "bad monomial space" in err


def test_certify(capsys, tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"n": 3, "parts": [{"d": 2, "coeffs": ["1", "-1", "2", "1", "-1", "1"]}]}))
    code, out, _ = run(capsys, "certify", "--input", str(p))
    js = json.loads(out)
    assert code == 0 and js["totals"]["total_rank"] == 5
    code, out, _ = run(capsys, "certify", "--input", '{"n": 3, "d": 2, "coeffs": ["1", "-1", "2", "1", "-1", "1"]}')
    assert code == 0 and json.loads(out)["totals"]["total_rank"] == 5
    code, _, _ = run(capsys, "certify", "--input", '{"n": 3, "parts": [{"d": 2, "coeffs": [0.5]}]}')
    assert code == 2


def test_examples(capsys):
    code, out, _ = run(capsys, "examples")
    js = json.loads(out)
    assert code == 0 and [e["report"]["totals"]["total_rank"] for e in js] == [5, 8]
    code, out, _ = run(capsys, "examples", "f", "--flip")
    assert code == 0 and json.loads(out)[0]["report"]["totals"]["prolong_sos"] is False


def test_examples_tampered_store(capsys, tmp_path):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"f": {"n": 3, "d": 2, "coeffs": ["1", "-1", "2", "1", "-1", "2"]},
                             "g": {"n": 4, "d": 2, "coeffs": ["1", "-1", "-1", "2", "1", "2",
                                                              "-1", "1", "-1", "1"]}}))
    code, _, _ = run(capsys, "examples", "f", "--witnesses", str(p))
    assert code == 1


def test_bands(capsys):
    code, out, _ = run(capsys, "bands", "--n", "6")
    js = json.loads(out)
    assert code == 0 and js[0]["threshold"] == 14


def test_rnd_with_out_and_cache(capsys, tmp_path):
    out1, out2, cache = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "cache.json"
    code, out, _ = run(capsys, "--cache", str(cache), "rnd", "--n", "3", "--d", "2", "--out", str(out1))
    js = json.loads(out)
    assert code == 0 and js["value"] == 5 and js["source"] == "computed" and js["verified"]
    code, out, _ = run(capsys, "--cache", str(cache), "rnd", "--n", "3", "--d", "2", "--out", str(out2))
    assert code == 0 and json.loads(out)["source"] == "cache"
    assert out1.read_bytes() == out2.read_bytes()


def test_rnd_budget_exit_code(capsys):
    code, out, _ = run(capsys, "rnd", "--n", "4", "--d", "2", "--budget-nodes", "3")
    js = json.loads(out)
    assert code == 3 and not js["complete"] and js["upper"] == 8


def test_rnd_usage_errors(capsys):
    assert run(capsys, "rnd", "--n", "3", "--d", "1")[0] == 2
    assert run(capsys, "rnd", "--n", "3")[0] == 2
    assert run(capsys, "--threads", "0", "rnd", "--n", "3", "--d", "2")[0] == 2


def test_config_file_and_flag_precedence(capsys, tmp_path):
    conf = tmp_path / "conf.txt"
    conf.write_text("# defaults\nformat = csv\nseed = 5\n")
    code, out, _ = run(capsys, "--config", str(conf), "verify-lemmas", "--lemma", "ghp", "--trials", "5")
    assert code == 0 and out.startswith("lemma,passed")
    assert out.splitlines()[1].endswith(",5")
    code, out, _ = run(capsys, "--config", str(conf), "--format", "json", "verify-lemmas",
                       "--lemma", "ghp", "--trials", "5")
    assert json.loads(out)[0]["seed"] == 5
    conf.write_text("colour = red\n")
    assert run(capsys, "--config", str(conf), "bands")[0] == 2


def test_verify_lemmas_out(capsys, tmp_path):
    p = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify-lemmas", "--lemma", "macaulay", "--trials", "50", "--out", str(p))
    assert code == 0 and json.loads(p.read_text())[0]["violations"] == 0
    assert run(capsys, "verify-lemmas", "--lemma", "nope")[0] == 2


def _seeded_cache(path):
    cache = ResultsCache(path)
    for n in (2, 3, 4, 5):
        cache.put(certificate(n, 2))
    return cache


def test_reproduce_clean_and_tampered(capsys, tmp_path):
    cache = tmp_path / "cache.json"
    _seeded_cache(cache)
    code, out, _ = run(capsys, "--cache", str(cache), "--format", "csv", "reproduce")
    assert code == 0, out
    lines = out.splitlines()
    assert [l.split(",")[0] for l in lines[1:]] == ["R_22", "R_32", "R_42", "R_52", "witness_f", "witness_g"]
    assert all(",pass," in l for l in lines[1:])
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"f": {"n": 3, "d": 2, "coeffs": ["1", "-1", "2", "1", "-1", "1"]},
                             "g": {"n": 4, "d": 2, "coeffs": ["1", "-1", "-1", "2", "1", "2",
                                                              "-1", "1", "-1", "2"]}}))
    code, out, _ = run(capsys, "--cache", str(cache), "reproduce", "--witnesses", str(w))
    rows = {r["row"]: r for r in json.loads(out)}
    assert code == 1 and rows["witness_g"]["status"] == "fail" and rows["witness_f"]["status"] == "pass"


def test_reproduce_rejects_tampered_cache(capsys, tmp_path):
    cache = tmp_path / "cache.json"
    _seeded_cache(cache)
    raw = json.loads(cache.read_text())
    raw["entries"]["4,2"]["certificate"]["witness"][1] = "1"
    cache.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "--cache", str(cache), "reproduce")
    rows = {r["row"]: r for r in json.loads(out)}
    assert code == 1 and rows["R_42"]["status"] == "fail" and "rejected" in rows["R_42"]["note"]
