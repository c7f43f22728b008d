from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cuntzcalc.algebra import (
    AlgebraContext,
    ContextMismatch,
    Element,
    gauge_expectation,
    membership,
    phi_preimage,
    word_degree,
    word_mul,
)

N = 2
I = Element.identity(N)
ZERO = Element.zero(N)
S1 = Element.gen(N, 1)
S2 = Element.gen(N, 2)


def word(a, b=(), coeff=1, gpow=0):
    return Element.word(N, a, b, coeff, gpow)


indices = st.lists(st.integers(1, N), max_size=4).map(tuple)
terms = st.tuples(indices, indices,
                  st.integers(-3, 3).filter(bool),
                  st.integers(-2, 2))
elements = st.lists(terms, max_size=4).map(
    lambda ts: Element(N, [((a, b), {g: Fraction(q)}) for a, b, q, g in ts]))
small_elements = st.lists(terms, max_size=2).map(
    lambda ts: Element(N, [((a, b), {g: Fraction(q)}) for a, b, q, g in ts]))

SETTINGS = dict(max_examples=60, deadline=None, derandomize=True)


# -- word level --------------------------------------------------------------

def test_word_mul_cases():
    # S_b* S_c collapses by prefix comparison
    assert word_mul(((1,), (1, 2)), ((2,), ())) is None
    assert word_mul(((1,), (1, 2)), ((1,), ())) == ((1,), (2,))
    assert word_mul(((1,), (1, 2)), ((1, 2), ())) == ((1,), ())
    assert word_mul(((1,), (1, 2)), ((1, 2, 2), ())) == ((1, 2), ())
    assert word_mul(((1,), ()), ((2,), (1,))) == ((1, 2), (1,))
    assert word_mul(((), (1,)), ((2,), ())) is None


def test_word_degree():
    assert word_degree(((1, 2), (1,))) == 1
    assert word_degree(((), ())) == 0


# -- canonical form ----------------------------------------------------------

def test_cuntz_relation():
    assert S1 * S1.adjoint() + S2 * S2.adjoint() == I
    assert S1.adjoint() * S1 == I
    assert S1.adjoint() * S2 == ZERO


def test_expansion_identified():
    # one-step expanded presentation normalizes to the same element
    coarse = word((1,), (2,))
    fine = word((1, 1), (2, 1)) + word((1, 2), (2, 2))
    assert coarse == fine
    assert coarse.terms == fine.terms


def test_contraction_collapses_complete_families():
    assert word((1, 1), (1, 1)) + word((1, 2), (1, 2)) == word((1,), (1,))
    total = sum((word((i, j), (i, j)) for i in (1, 2) for j in (1, 2)), ZERO)
    assert total == I
    assert total.is_identity()


def test_partial_family_stays_expanded():
    x = word((1, 1), (1, 1), coeff=Fraction(1, 2), gpow=-1) \
        + word((1, 2), (1, 2)) \
        + word((2,), (2,), gpow=1)
    assert x.max_level() == 2
    assert len(x.terms) == 4  # P_2 expands to the common level
    assert sorted(x.degrees()) == [0]


def test_mixed_degree_groups_are_independent():
    x = word((1,)) + word((1,), (2, 1))
    assert sorted(x.degrees()) == [-1, 1]
    assert x.max_level() == 2


def test_zero_and_subtraction():
    x = word((1, 2), (2,), coeff=3, gpow=1)
    assert (x - x).is_zero()
    assert x + ZERO == x
    assert -x + x == ZERO


def test_letter_validation_and_context():
    with pytest.raises(ValueError):
        Element(N, {((3,), ()): {0: 1}})
    with pytest.raises(ValueError):
        AlgebraContext(1)
    with pytest.raises(ValueError):
        AlgebraContext(10)
    with pytest.raises(ContextMismatch):
        S1 + Element.gen(3, 1)


def test_scalar_interface():
    x = word((1,), (2,))
    assert 2 * x == x + x
    assert x * 2 == x + x
    assert x.scale(Fraction(1, 2)) + x.scale(Fraction(1, 2)) == x
    assert x.scale(1, gpow=2).scale(1, gpow=-2) == x


def test_repr_is_stable():
    x = word((1,), (2,)) + word((2,))
    assert repr(x) == repr(Element(N, dict(x.terms)))


# -- shift and preimages -----------------------------------------------------

def test_phi_preimage_roundtrip():
    from cuntzcalc.endo import shift
    x = word((1, 2), (2,), coeff=2) + word((1,), gpow=1)
    assert phi_preimage(shift(x), 1) == x
    assert phi_preimage(shift(shift(x)), 2) == x
    assert phi_preimage(S1, 1) is None
    assert phi_preimage(I, 3) == I


def test_membership_basics():
    p1 = word((1,), (1,))
    assert membership(p1, "D")
    assert membership(p1, "F")
    assert membership(p1, "Fk", 1)
    assert not membership(S1, "F")
    assert not membership(word((1,), (2,)), "D")
    from cuntzcalc.endo import shift
    assert membership(shift(word((1,), (2,))), "phik", 1)
    assert not membership(word((1,), (2,)), "phik", 1)
    with pytest.raises(ValueError):
        membership(p1, "Fk")
    with pytest.raises(ValueError):
        membership(p1, "bogus")


def test_gauge_expectation():
    x = word((1,), (1,), gpow=2) + word((1,), ()) + word((2,), (2,))
    assert gauge_expectation(x) == word((2,), (2,))
    assert gauge_expectation(I) == I


# -- algebra axioms (property suite) ----------------------------------------

@settings(**SETTINGS)
@given(small_elements, small_elements, small_elements)
def test_mul_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@settings(**SETTINGS)
@given(small_elements, small_elements, small_elements)
def test_mul_distributes(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (y + z) * x == y * x + z * x


@settings(**SETTINGS)
@given(elements, elements)
def test_add_commutative(x, y):
    assert x + y == y + x


@settings(**SETTINGS)
@given(small_elements, small_elements)
def test_adjoint_antimultiplicative(x, y):
    assert (x * y).adjoint() == y.adjoint() * x.adjoint()


@settings(**SETTINGS)
@given(elements)
def test_adjoint_involution(x):
    assert x.adjoint().adjoint() == x


@settings(**SETTINGS)
@given(elements)
def test_normal_form_idempotent(x):
    assert Element(N, [(t, dict(c)) for t, c in x.terms.items()]) == x


@settings(**SETTINGS)
@given(elements, elements)
def test_equality_iff_zero_difference(x, y):
    assert (x == y) == (x - y).is_zero()
    if x == y:
        assert hash(x) == hash(y)
