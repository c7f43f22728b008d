import random
from fractions import Fraction

import pytest

from cuntzcalc.algebra import Element, membership
from cuntzcalc.endo import NotSumOfWords, gauge, is_unitary, left_inverse, shift
from cuntzcalc.exprio import resolve
from cuntzcalc.intertwine import (
    ConstructionNotSupported,
    PreconditionFailed,
    agree_on_F,
    coboundary_witness,
    intertwiner_space,
    is_self_intertwiner,
    normalizer_cocycle_check,
    perturb,
)
from cuntzcalc.sampling import random_permutation_unitary

N = 2
I = Element.identity(N)
U_CP = resolve("@u_cp")
V_CP = resolve("@v_cp")
W_CP = resolve("@w_cp")
FLIP = resolve("S2 S1* + S1 S2*")
W0 = resolve("S1 S11* + S21 S12* + S22 S2*", 2)
ROT = resolve("3/5 S1 S1* + 4/5 S1 S2* - 4/5 S2 S1* + 3/5 S2 S2*", 2)


# -- fixed points ------------------------------------------------------------

def test_self_intertwiner_examples():
    assert is_self_intertwiner(U_CP, V_CP)
    assert is_self_intertwiner(U_CP, V_CP.adjoint())
    assert is_self_intertwiner(U_CP, I)
    assert not is_self_intertwiner(U_CP, FLIP)
    with pytest.raises(ValueError):
        is_self_intertwiner(Element.gen(N, 1), I)


def test_self_intertwiners_form_an_algebra():
    x, y = V_CP, V_CP.adjoint()
    for z in (x * y, x + y, x.scale(Fraction(2, 3)) - y, x * x):
        assert is_self_intertwiner(U_CP, z)


# -- agreement on the core ---------------------------------------------------

def test_agree_on_F():
    assert agree_on_F(U_CP, W_CP, 4) == (True, 0)
    assert agree_on_F(W_CP, U_CP, 4) == (True, 0)
    assert agree_on_F(U_CP, U_CP, 5) == (True, 0)
    assert agree_on_F(FLIP, I, 2) == (False, 1)
    with pytest.raises(ValueError):
        agree_on_F(Element.gen(N, 1), I, 1)


def test_perturb():
    w = perturb(U_CP, V_CP)
    assert w == W_CP
    # the fixed-point identity makes both orders the same element
    assert perturb(U_CP, V_CP, order="shift_right") == W_CP
    assert perturb(U_CP, I) == U_CP
    with pytest.raises(PreconditionFailed):
        perturb(U_CP, FLIP)
    with pytest.raises(ValueError):
        perturb(U_CP, V_CP, order="sideways")
    with pytest.raises(ValueError):
        perturb(Element.gen(N, 1), I)


def test_perturbed_symbols_disagree_outside_the_core():
    # w_cp acts like u_cp on the core but differs on a lone isometry
    from cuntzcalc.endo import lambda_apply
    s1 = Element.gen(N, 1)
    assert lambda_apply(W_CP, s1) != lambda_apply(U_CP, s1)
    e = Element.word(N, (1,), (1,))
    assert lambda_apply(W_CP, e) == lambda_apply(U_CP, e)


def test_normalizer_cocycle_check():
    for w in (FLIP, V_CP, W_CP, W0):
        assert normalizer_cocycle_check(w)
    with pytest.raises(NotSumOfWords):
        normalizer_cocycle_check(ROT)


# -- intertwiner spaces ------------------------------------------------------

def test_space_of_u_cp_at_level_3():
    rep = intertwiner_space(U_CP, 3)
    assert rep.level == 3
    assert rep.dimension == 21
    assert len(rep.basis) == 21
    assert rep.contains(V_CP)
    assert rep.contains(V_CP.adjoint())
    assert rep.contains(I)
    assert rep.contains(V_CP.scale(3) - I.scale(Fraction(1, 7)))
    # v*v is still a fixed point but its words outgrow the level-3 window
    assert is_self_intertwiner(U_CP, V_CP * V_CP)
    assert not rep.contains(V_CP * V_CP)
    assert not rep.contains(Element.gen(N, 1))
    assert not rep.contains(FLIP)
    noncore = [b for b in rep.basis if not membership(b, "F")]
    assert len(noncore) == 8


def test_space_coefficients_reconstruct():
    rep = intertwiner_space(U_CP, 2)
    assert rep.dimension == 5
    rng = random.Random(4)
    combo = Element.zero(N)
    for b in rep.basis:
        combo = combo + b.scale(Fraction(rng.randint(-3, 3)))
    coeffs = rep.coefficients_of(combo)
    rebuilt = Element.zero(N)
    for q, b in zip(coeffs, rep.basis):
        rebuilt = rebuilt + b.scale(q)
    assert rebuilt == combo
    assert is_self_intertwiner(U_CP, combo)
    assert rep.coefficients_of(Element.gen(N, 1)) is None
    assert rep.coefficients_of(Element.gen(N, 1).scale(1, gpow=2)) is None


def test_space_degenerate_levels():
    assert intertwiner_space(U_CP, 0).dimension == 1
    assert intertwiner_space(I, 3).dimension == 1
    assert intertwiner_space(FLIP, 2).dimension == 1
    assert intertwiner_space(I, 0).basis == (I,)
    with pytest.raises(ValueError):
        intertwiner_space(Element.gen(N, 1), 1)
    with pytest.raises(ValueError):
        intertwiner_space(U_CP, -1)


def test_space_members_are_fixed_points_for_random_permutations():
    rng = random.Random(11)
    for _ in range(6):
        u = random_permutation_unitary(2, 2, rng)
        rep = intertwiner_space(u, 2)
        assert rep.dimension >= 1
        combo = Element.zero(N)
        for b in rep.basis:
            combo = combo + b.scale(Fraction(rng.randint(-2, 2)))
        assert is_self_intertwiner(u, combo)
        # unitary members keep the core restriction of u itself
        for b in rep.basis:
            if is_unitary(b):
                assert agree_on_F(u, u * shift(b), 3) == (True, 0)


# -- coboundary form of the gauge cocycle ------------------------------------

def test_coboundary_witness_for_w_cp():
    U, z = coboundary_witness(W_CP)
    assert membership(U, "F")
    assert is_unitary(U)
    assert W_CP.adjoint() * U == shift(z)
    lhs = left_inverse(W_CP.adjoint() * gauge(W_CP))
    assert lhs == z * gauge(z.adjoint())


def test_coboundary_witness_core_inputs():
    U, z = coboundary_witness(FLIP)
    assert U == FLIP and z.is_identity()
    U, z = coboundary_witness(ROT)
    assert U == ROT and z.is_identity()


def test_coboundary_witness_refusals():
    with pytest.raises(PreconditionFailed):
        coboundary_witness(W0)
    with pytest.raises(ConstructionNotSupported):
        coboundary_witness(ROT * W_CP)
    with pytest.raises(ValueError):
        coboundary_witness(Element.gen(N, 1))
