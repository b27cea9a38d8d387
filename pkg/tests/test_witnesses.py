import json
import math
from fractions import Fraction

import pytest

from mppa import witnesses as W
from mppa.hochschild import Chain, b, connes_B, mixed_differential, one_tensor, push, using_conventions
from mppa.ncalg import a2_loc, eval_q, interval_kI, laurent, laurent_pair, mu1, mu2, two_object_groupoid_C, z_to_xy

ALL = W.identities("all")


def test_every_identity_holds_exactly():
    report = W.run_suite("all")
    assert report.ok, report.to_text()
    assert len(report.results) == len(ALL)


@pytest.mark.parametrize("ident", [i for i in ALL if i.oracle], ids=lambda i: i.id)
def test_every_identity_passes_the_oracle(ident):
    ok, detail = W._check(ident, W.OracleBackend(trials=20, seed=3))
    assert ok, detail


def test_report_is_deterministic_and_parses():
    a = W.run_suite("all", oracle_trials=5, seed=11)
    again = W.run_suite("all", oracle_trials=5, seed=11)
    assert a.to_text() == again.to_text()
    assert a.to_json() == again.to_json()
    data = json.loads(a.to_json())
    assert data["ok"] and {r["status"] for r in data["results"]} == {"pass"}
    assert a.to_text().splitlines()[-1] == f"{len(ALL)}/{len(ALL)} identities pass"


def test_unknown_suite():
    with pytest.raises(KeyError):
        W.identities("bogus")


# oracles computed by hand from the tensor formulas

def test_alpha_tilde_one_is_a_cycle_and_B_doubles():
    A = laurent()
    pair = W.alpha_n(A, n=1)
    assert pair.alpha_tilde == Chain.tensor("xinv", "x", pres=A) - Chain.tensor("x", "xinv", pres=A)
    assert pair.alpha * 2 == pair.alpha_tilde
    assert b(pair.alpha_tilde).is_zero()
    assert connes_B(pair.alpha_tilde) == one_tensor(pair.alpha_tilde) * 2


def test_b_of_alpha_tilde_two_by_hand():
    # inner faces put an idempotent in a slot ≥ 1; only the outer faces survive
    A = laurent()
    t = W.alpha_n(A, n=2).alpha_tilde
    expected = (Chain.tensor("1", "xinv", "x", pres=A) - Chain.tensor("1", "x", "xinv", pres=A)) * 2
    assert b(t) == expected


def test_interval_boundary_needs_the_half():
    kI = interval_kI()
    pair = W.alpha_n(kI, n=1)
    e12 = Chain.tensor("id(1)", pres=kI) - Chain.tensor("id(2)", pres=kI)
    assert b(pair.alpha) == e12
    assert b(pair.alpha_tilde) == e12 * 2


def test_evaluation_kills_alpha():
    A = laurent()
    for q in (3, Fraction(-2, 5), 1):
        assert push(W.alpha_n(A).alpha_tilde, eval_q(q)).is_zero()


@pytest.mark.parametrize("pres", [laurent_pair(), two_object_groupoid_C()], ids=["free", "C"])
def test_beta1_cospan(pres):
    beta = W.beta1_cospan(pres)
    z = push(W.alpha_n(laurent("z"), "z").alpha_tilde, z_to_xy(pres))
    ax = Chain.tensor("xinv", "x", pres=pres) - Chain.tensor("x", "xinv", pres=pres)
    ay = Chain.tensor("yinv", "y", pres=pres) - Chain.tensor("y", "yinv", pres=pres)
    assert b(beta) == z - ax - ay
    assert not beta.is_zero()


def test_beta1_a2_homotopy():
    A = a2_loc()
    target = push(W.alpha_n(laurent("x1"), "x1").alpha_tilde, mu1()) + \
        push(W.alpha_n(laurent("x2"), "x2").alpha_tilde, mu2())
    assert b(W.beta1_a2(A)) == target
    assert not target.is_zero()


@pytest.mark.parametrize("N", [1, 3, 5])
def test_mixed_lift(N):
    A = laurent()
    res = mixed_differential(W.alpha_mixed(A, N=N))
    assert res.vanishes_through_order()
    assert res.remainder == connes_B(W.alpha_n(A, n=N + 1).alpha) * math.factorial(N)
    assert not res.remainder.is_zero()


def test_wrong_weights_break_the_lift():
    A = laurent()
    res = mixed_differential(W.alpha_mixed(A, N=3, weights=[1, 1, 1, 1]))
    assert res.first_nonzero() == 2


# negative controls

def _failing(**conv):
    with using_conventions(**conv):
        return {r.id for r in W.run_suite("all").failures()}


def test_flipped_connes_sign_is_caught():
    failed = _failing(connes_sign="shifted")
    assert {"laurent/B-alpha2", "a2/bB", "a2/homotopy", "mixed/u1"} <= failed


def test_unnormalized_complex_is_caught():
    failed = _failing(normalized=False)
    assert {"laurent/b-alpha2", "mixed/u1"} <= failed


@pytest.mark.parametrize("wrong", [
    lambda K: [K.b(W._beta1_a2(K, K.algebra(a2_loc())))],
    lambda K: [K.el(K.algebra(a2_loc()), "a2inv*e") - K.el(K.algebra(a2_loc()), "e*a2inv")],
], ids=["b(beta1) alone", "misplaced inverse"])
def test_oracle_rejects_false_identities(wrong):
    ident = W.Identity("x", "a2", "false", wrong)
    for K in (W.ExactBackend(), W.OracleBackend(trials=10)):
        assert not W._check(ident, K)[0]
