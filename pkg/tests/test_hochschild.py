import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_word
from mppa.hochschild import (
    Chain, MixedChain, b, connes_B, mixed_differential, one_tensor, push, using_conventions,
)
from mppa.ncalg import a2_loc, laurent, laurent_pair, mu1, mu2, rescale, two_object_groupoid_C, z_to_xy

ALGEBRAS = [laurent, laurent_pair, two_object_groupoid_C, a2_loc]


def random_chain(pres, rng, degree, terms=3):
    """Sum of admissible random tensors of normal words (found by rejection)."""
    out = Chain(pres, degree)
    for _ in range(terms):
        for _ in range(200):
            slots = []
            for _ in range(degree + 1):
                nf = pres.nf_word(random_word(pres, rng, 3))
                if not nf:
                    break
                slots.append(pres.word(rng.choice(sorted(nf))))
            if len(slots) < degree + 1:
                continue
            t = Chain.tensor(*slots, pres=pres) * rng.randint(-3, 3)
            if t:
                out = out + t
                break
    return out


def test_small_examples():
    A = laurent()
    alpha = Chain.tensor("xinv", "x", pres=A) - Chain.tensor("x", "xinv", pres=A)
    assert b(alpha).is_zero()
    assert str(alpha) == "-x ⊗ xinv + xinv ⊗ x"
    assert str(connes_B(alpha)) == "-2*id(o) ⊗ x ⊗ xinv + 2*id(o) ⊗ xinv ⊗ x"
    assert str(one_tensor(alpha)) == "-id(o) ⊗ x ⊗ xinv + id(o) ⊗ xinv ⊗ x"


def test_normalization_drops_idempotent_slots():
    A = laurent()
    assert Chain.tensor("x", "1", pres=A).is_zero()
    assert not Chain.tensor("1", "x", pres=A).is_zero()
    with using_conventions(normalized=False):
        assert not Chain.tensor("x", "1", pres=A).is_zero()


def test_cyclic_composability_is_enforced():
    A = a2_loc()
    assert Chain.tensor("e", "e", pres=A).is_zero()
    assert not Chain.tensor("e", "estar", pres=A).is_zero()


@pytest.mark.parametrize("build", ALGEBRAS, ids=lambda f: f.__name__)
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), degree=st.integers(0, 3))
def test_complex_identities(build, seed, degree):
    pres = build()
    c = random_chain(pres, random.Random(seed), degree)
    assert b(b(c)).is_zero()
    assert connes_B(connes_B(c)).is_zero()
    assert (b(connes_B(c)) + connes_B(b(c))).is_zero()


def test_wrong_connes_sign_breaks_anticommutation():
    A = laurent()
    c = Chain.tensor("x", "xinv", "x", pres=A)
    with using_conventions(connes_sign="shifted"):
        assert not (b(connes_B(c)) + connes_B(b(c))).is_zero()


@pytest.mark.parametrize("m", [mu1(), mu2(), rescale(3), z_to_xy(laurent_pair())], ids=repr)
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32), degree=st.integers(0, 2))
def test_push_commutes_with_b_and_B(m, seed, degree):
    c = random_chain(m.source, random.Random(seed), degree)
    assert push(b(c), m) == b(push(c, m))
    assert push(connes_B(c), m) == connes_B(push(c, m))


def test_push_rejects_foreign_chain():
    with pytest.raises(ValueError):
        push(Chain.tensor("e", "estar", pres=a2_loc()), mu1())


def test_mixed_differential_coefficients():
    A = laurent()
    a1 = Chain.tensor("xinv", "x", pres=A) - Chain.tensor("x", "xinv", pres=A)
    m = MixedChain([a1, Chain(A, 3)])
    res = mixed_differential(m)
    assert res.vanishes_through_order() is False
    assert res.first_nonzero() == 1
    assert res.coefficients[1] == -connes_B(a1)
    assert res.remainder.is_zero()


def test_mixed_chain_checks_degrees():
    A = laurent()
    with pytest.raises(ValueError):
        MixedChain([Chain.tensor("x", pres=A), Chain.tensor("x", "x", pres=A)])
