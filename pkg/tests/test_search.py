import copy
import json

import pytest

import oracles
from conftest import certificate, slow_enabled
from diagsos.counting import rank
from diagsos.prolongation import CoeffVector, apply_list, build_direct
from diagsos.search import (RndCertificate, SearchConfig, column_orbit_reps, compute_rnd,
                            rank1_patch, theorem_floor, verify_certificate)
from diagsos.witnesses import vector


def _tampered(cert, edit):
    obj = copy.deepcopy(cert.to_json())
    edit(obj)
    return RndCertificate.from_json(obj)


@pytest.mark.parametrize("n,d,value", [(2, 2, 2), (3, 2, 5), (4, 2, 8)])
def test_known_values(n, d, value):
    cert = certificate(n, d)
    assert cert.complete and cert.value == value
    assert verify_certificate(cert)
    jh = apply_list(build_direct(n, d), cert.witness.entries)
    assert min(jh) >= 0 and rank(jh) == value and not cert.witness.is_nonnegative()


def test_witnesses_are_the_extremal_forms():
    assert certificate(2, 2).witness.strings() == ["1", "-1", "1"]
    assert certificate(3, 2).witness == vector("f")
    assert certificate(4, 2).witness == vector("g")


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_matches_extreme_ray_oracle(n, d):
    best, _ = oracles.brute_rnd(n, d)
    assert certificate(n, d).value == best


@pytest.mark.skipif(not slow_enabled(), reason="set DIAGSOS_SLOW=1 (takes about 5 minutes)")
def test_matches_extreme_ray_oracle_4_2():
    best, _ = oracles.brute_rnd(4, 2)
    assert certificate(4, 2).value == best


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_symmetry_reduction_does_not_change_value(n, d):
    full = certificate(n, d, symmetry=False)
    assert full.value == certificate(n, d).value
    assert verify_certificate(full)


def test_recursion_inequality_holds_on_computed_cells():
    r33, r32, r23 = certificate(3, 3).value, certificate(3, 2).value, certificate(2, 3).value
    assert r33 >= min(r32, 3 + r23, 3 * 3 - 4)


def test_values_respect_floors():
    for n, d in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)]:
        c = certificate(n, d)
        assert c.value >= theorem_floor(n, d)


def test_floors_mode_agrees():
    c = compute_rnd(SearchConfig(4, 2, use_floors=True))
    assert c.value == 8 and verify_certificate(c)


def test_budget_gives_sound_bracket():
    c = compute_rnd(SearchConfig(4, 2, budget_nodes=5))
    assert not c.complete and c.value is None
    assert c.lower <= 8 <= c.upper
    assert verify_certificate(c)


def test_threads_give_identical_certificate():
    one = compute_rnd(SearchConfig(3, 3, threads=1)).to_json(timing=False)
    two = compute_rnd(SearchConfig(3, 3, threads=2)).to_json(timing=False)
    assert json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)


def test_certificate_json_roundtrip():
    c = certificate(3, 2)
    back = RndCertificate.from_json(json.loads(json.dumps(c.to_json())))
    assert verify_certificate(back)
    assert "timestamps" not in c.to_json(timing=False)
    with pytest.raises(ValueError):
        RndCertificate.from_json({**c.to_json(), "schema": "other"})


def test_tamper_witness_made_nonnegative():
    c = certificate(3, 2)
    bad = _tampered(c, lambda o: o["witness"].__setitem__(1, "1"))
    ok, why = verify_certificate(bad, explain=True)
    assert not ok and why


def test_tamper_value_lowered():
    c = certificate(3, 2)

    def edit(o):
        o["value"] -= 1
        o["lower"] -= 1
        o["upper"] -= 1
    assert not verify_certificate(_tampered(c, edit))


def test_tamper_log_removed_or_corrupted():
    c = certificate(3, 2)
    assert not verify_certificate(_tampered(c, lambda o: o["lower_bound_log"].__setitem__("trees", {})))

    def corrupt(o):
        # flip the first Farkas multiplier found in the stored trees
        def walk(node):
            if "y" in node:
                ge = node["y"]["ge"]
                k = next(iter(ge))
                ge[k] = ge[k] + 1
                return True
            return any(walk(ch) for ch in node.get("c", []))
        for tree in o["lower_bound_log"]["trees"].values():
            if walk(tree):
                return
    assert not verify_certificate(_tampered(c, corrupt))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(1, 2)
    with pytest.raises(ValueError):
        SearchConfig(3, 1)
    with pytest.raises(ValueError):
        SearchConfig(3, 2, budget_nodes=0)
    with pytest.raises(ValueError):
        SearchConfig(3, 2, budget_secs=-1)
    with pytest.raises(ValueError):
        SearchConfig(3, 2, initial=vector("g"))


def test_orbit_representatives():
    assert column_orbit_reps(3, 2) == [0, 1]
    assert column_orbit_reps(3, 2, symmetry=False) == list(range(6))
    assert len(column_orbit_reps(4, 3)) == 3


def test_theorem_floor():
    assert theorem_floor(3, 2) == 5
    assert theorem_floor(6, 2) == 15
    assert theorem_floor(2, 2) == 2


def test_rank1_patch_single_monomial():
    delta = rank1_patch(CoeffVector.of(2, 2, [0, 3, 0]))
    assert delta.strings() == ["3", "0"]
    assert apply_list(build_direct(2, 1), delta.entries) == [3, 3, 0]


def test_rank1_patch_zero_and_absent():
    assert rank1_patch(CoeffVector.zero(2, 2)).is_zero()
    assert rank1_patch(CoeffVector.of(2, 2, [1, 0, 1])) is None
    with pytest.raises(ValueError):
        rank1_patch(CoeffVector.of(2, 2, [1, -1, 0]))


def test_rank1_patch_two_adjacent_monomials():
    # x2^2 + x2 x3 in (x2, x3): prolongation x2^3 + 2 x2^2 x3 + x2 x3^2 has rank 3 = 2(n-1) - 1
    h = CoeffVector.of(2, 2, [1, 2, 0])
    delta = rank1_patch(h)
    assert rank(delta.entries) == 1 and delta.is_nonnegative()
    jd = apply_list(build_direct(2, 1), delta.entries)
    assert all(a >= b for a, b in zip(jd, h.entries))
