import json
from fractions import Fraction

import pytest

from mppa import preproj as P
from mppa.ncalg import check_morphism, quiver_loc
from mppa.quiver import FusionOrder, Quiver, a2, jordan, star_quiver, two_cycle


def test_a2_moment_map():
    mm = P.moment_map(a2())
    assert str(mm.mu["1"]) == "l_e"
    assert mm.mu["2"] == mm.pres.macro("a2_e")


def test_jordan_moment_map():
    mm = P.moment_map(jordan())
    B = mm.pres
    assert mm.mu["1"] == B.parse("(1 + e*estar)*l_e")
    assert str(mm.mu["1"]) == "l_e + e*estar*l_e"


def test_star_moment_map_depends_on_order():
    q = star_quiver(2)
    B = quiver_loc(q)
    default = P.moment_map(q)
    swapped = P.moment_map(q, FusionOrder(("c", "v1", "v2"), {"c": ("e2", "e1"), "v1": (), "v2": ()},
                                          {"c": (), "v1": ("e1",), "v2": ("e2",)}))
    assert default.mu["c"] == B.parse("(id(c) + e1*e1star)*(id(c) + e2*e2star)")
    assert swapped.mu["c"] == B.parse("(id(c) + e2*e2star)*(id(c) + e1*e1star)")
    assert default.mu["c"] != swapped.mu["c"]


def test_fusion_equals_moment_map(test_quiver):
    fused = P.fusion_build(test_quiver)
    direct = P.moment_map(test_quiver)
    for v in test_quiver.vertices:
        assert fused.moment.mu[v] == direct.mu[v]
        assert fused.moment.mu_inv[v] == direct.mu_inv[v]
    assert check_morphism(fused.gluing) is None


def test_jordan_fusion_is_one_step():
    fused = P.fusion_build(jordan())
    assert [s.factors for s in fused.steps] == [["y_e", "x_e"]]


def test_moment_map_inverses_and_morphism(test_quiver):
    mm = P.moment_map(test_quiver)
    assert mm.inverse_defects() == []
    assert check_morphism(mm.morphism()) is None


def test_determinant_product_is_one(test_quiver):
    assert set(P.det_check(test_quiver, trials=20, seed=4)) == {1}


def test_cbs_relation_examples():
    B = quiver_loc(jordan())
    rel = P.cbs_relation(jordan(), {"1": 3})
    assert rel == B.parse("(1 + e*estar)*l_e - 3*id(1)")
    A2 = quiver_loc(a2())
    rel = P.cbs_relation(a2(), {"1": 1, "2": 1})
    assert rel.sandwich("1") == A2.parse("l_e - id(1)")
    assert rel.sandwich("2") == A2.parse("a2_e - id(2)")
    empty = Quiver.from_lists(["1", "2"], [])
    assert P.cbs_relation(empty, {}).is_zero()


def test_cbs_relation_rejects_bad_sequence():
    with pytest.raises(P.PreprojError, match="incompatible order"):
        P.cbs_relation(jordan(), {"1": 1}, sequence=[("e", 1), ("e", 1)])


@pytest.mark.parametrize("qval", [1, 2])
def test_build_upsilon(test_quiver, qval):
    q = {v: (qval if i == 0 else 1) for i, v in enumerate(test_quiver.vertices)}
    dga = P.build_upsilon(test_quiver, q)
    assert dga.problems() == []
    for v in test_quiver.vertices:
        z = dga.pres.gen(P.zp(v))
        expected = dga.moment.mu[v] - dga.base.e(v) * q[v]
        assert dga.d(z).terms == expected.terms
        assert dga.d(dga.d(z)).is_zero()


def test_upsilon_differential_is_a_graded_derivation():
    dga = P.build_upsilon(jordan(), {"1": 2})
    A = dga.pres
    z, e = A.gen("zp_1"), A.gen("e")
    assert dga.d(z * z) == dga.d(z) * z - z * dga.d(z)
    assert dga.d(e * z) == e * dga.d(z)
    assert dga.d(dga.d(z * e * z)).is_zero()


def test_upsilon_json():
    data = json.loads(P.build_upsilon(a2(), {"1": 1, "2": Fraction(1, 2)}).dumps())
    assert data["differential"] == {"zp_1": "-id(1) + l_e", "zp_2": "1/2*id(2) + e*estar"}
    assert {"name": "zp_1", "src": "1", "tgt": "1", "degree": -1} in data["generators"]


def test_zero_parameter_is_rejected():
    with pytest.raises(P.PreprojError, match="invertible"):
        P.build_upsilon(a2(), {"1": 0, "2": 1})


@pytest.mark.parametrize("Q", [a2(), jordan(), two_cycle(), star_quiver(3)], ids=lambda q: str(len(q.edges)))
def test_h0_blocks_coincide(Q):
    report = P.h0_check(Q, {v: 2 for v in Q.vertices})
    assert report.ok and {m.status for m in report.memberships} == {"identical"}


def test_h0_with_reordered_relation_needs_multipliers():
    report = P.h0_check(jordan(), {"1": 2}, sequence=[("e", -1), ("e", 1)])
    assert report.ok
    assert {m.status for m in report.memberships} == {"multipliers"}


@pytest.mark.parametrize("Q", [a2(), jordan()], ids=["A2", "jordan"])
def test_h0_sabotaged_parameter_is_not_certified(Q):
    report = P.h0_check(Q, {v: 2 for v in Q.vertices}, relation_q={v: 3 for v in Q.vertices})
    assert not report.ok
    assert report.status == "uncertified"
