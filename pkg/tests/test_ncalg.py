import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_element
from mppa.ncalg import (
    AlgebraError, AlgebraMorphism, Generator, Presentation, RewriteBudgetExceeded, a2_loc, check_morphism,
    critical_pairs, equals, interval_kI, laurent, laurent_pair, mu1, mu2, nf, pushout_quotient, pushout_xy_q,
    quiver_loc, two_object_groupoid_C, z_to_xy,
)
from mppa.quiver import TEST_QUIVERS

CONFLUENT = [laurent, laurent_pair, interval_kI, a2_loc, two_object_groupoid_C]


def test_composition_is_functional():
    A = a2_loc()
    assert A.parse("id(2)*e") == A.gen("e")
    assert A.parse("id(1)*e").is_zero()
    assert A.parse("e*estar").pres.block(("e", "estar")) == ("2", "2")


def test_unit_is_sum_of_idempotents():
    A = a2_loc()
    assert str(A.one()) == "id(1) + id(2)"
    assert A.parse("1*e*1") == A.gen("e")


@pytest.mark.parametrize("expr, expected", [
    ("estar*e*l", "id(1) - l"),
    ("l*estar*e", "id(1) - l"),
    ("a1*l", "id(1)"),
    ("a2*a2inv", "id(2)"),
    ("a2inv*a2", "id(2)"),
    ("x*xinv - 1", "0"),
])
def test_normal_forms(expr, expected):
    pres = laurent() if "x" in expr else a2_loc()
    assert str(pres.parse(expr)) == expected


@pytest.mark.parametrize("lhs, rhs", [
    ("a2inv*e", "e*l"),
    ("estar*a2inv", "l*estar"),
    ("e*estar*a2inv", "id(2) - a2inv"),
    ("a2inv*e*estar", "id(2) - a2inv"),
])
def test_inverse_relations(lhs, rhs):
    A = a2_loc()
    assert A.parse(lhs) == A.parse(rhs)


@pytest.mark.parametrize("build", CONFLUENT, ids=lambda f: f.__name__)
def test_critical_pairs_join(build):
    pres = build()
    pairs = critical_pairs(pres, depth=12)
    assert pairs and all(p.joinable for p in pairs)
    assert pres.confluent


@pytest.mark.parametrize("name", sorted(TEST_QUIVERS))
def test_quiver_loc_is_confluent(name):
    assert quiver_loc(TEST_QUIVERS[name]()).confluent


def test_a_rule_without_its_twin_is_not_confluent():
    gens = [Generator("x", "o", "o"), Generator("y", "o", "o")]
    pres = Presentation("broken", ["o"], gens, [(("x", "y"), "id(o)"), (("y", "x"), "x")])
    assert not all(p.joinable for p in critical_pairs(pres))


def test_runaway_rewriting_hits_the_budget():
    pres = Presentation("loop", ["o"], [Generator("x", "o", "o")], [(("x",), "x*x")], step_budget=50)
    with pytest.raises(RewriteBudgetExceeded):
        pres.parse("x")


def test_rules_must_preserve_block_and_degree():
    gens = [Generator("e", "1", "2"), Generator("f", "1", "1")]
    pres = Presentation("bad", ["1", "2"], gens, [(("e",), "f")])
    with pytest.raises(AlgebraError):
        pres.rules


def test_unknown_symbol_and_trailing_input():
    A = a2_loc()
    with pytest.raises(AlgebraError):
        A.parse("q*e")
    with pytest.raises(AlgebraError):
        A.parse("e )")


@pytest.mark.parametrize("build", CONFLUENT + [lambda: quiver_loc(TEST_QUIVERS["star3"]())],
                         ids=["laurent", "pair", "kI", "a2", "C", "star3"])
@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_printer_round_trip(build, seed):
    pres = build()
    a = nf(random_element(pres, random.Random(seed)))
    assert pres.parse(str(a)) == a
    assert str(pres.parse(str(a))) == str(a)


@settings(max_examples=500, deadline=None)
@given(seed=st.integers(0, 2**32), which=st.sampled_from(range(len(CONFLUENT))))
def test_normal_form_is_idempotent(seed, which):
    pres = CONFLUENT[which]()
    a = random_element(pres, random.Random(seed), terms=5, max_len=6)
    once = nf(a)
    assert nf(once).terms == once.terms
    assert all(pres.rewrite_once(w) is None for w in once.terms)


def test_equals_is_exact_on_confluent_presentations():
    A = a2_loc()
    assert equals(A.parse("a2inv*e"), A.parse("e*l")) == (True, "exact")
    assert equals(A.parse("e"), A.parse("2*e"))[0] is False


@pytest.mark.parametrize("m", [
    mu1(), mu2(), z_to_xy(laurent_pair()), z_to_xy(two_object_groupoid_C()), z_to_xy(pushout_xy_q(3)),
    pushout_quotient(Fraction(-1, 2)),
], ids=repr)
def test_builtin_morphisms_are_well_defined(m):
    assert check_morphism(m) is None


def test_check_morphism_reports_violations():
    A, B = laurent(), a2_loc()
    wrong_block = AlgebraMorphism(A, B, {"x": "e", "xinv": "estar"}, {"o": "1"})
    assert "block" in check_morphism(wrong_block)
    not_inverse = AlgebraMorphism(A, B, {"x": "a1", "xinv": "a1"}, {"o": "1"})
    assert "violated rule" in check_morphism(not_inverse)


def test_morphism_composition():
    from mppa.ncalg import inv_morphism
    inv = inv_morphism()
    twice = inv.then(inv)
    A = laurent()
    assert twice(A.parse("x + 2*xinv")) == A.parse("x + 2*xinv")
