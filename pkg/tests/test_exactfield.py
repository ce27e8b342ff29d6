from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from involquat.errors import DivisionByZero, FieldMismatch, NoAutomorphism, UnsupportedField
from involquat.exactfield import (
    GF,
    QQ,
    Scalar,
    field_arithmetic,
    is_irreducible,
    iter_elements,
    parse_field_name,
    sqrt_in_field,
    unitary_conjugate,
)

FINITE = [GF(2), GF(3), GF(5), GF(7), GF(13), GF(2, 2), GF(2, 3), GF(3, 2), GF(5, 2, modulus=(2, 0, 1))]


def test_prime_field_product():
    F = GF(3)
    assert field_arithmetic(Scalar.of(F, 2), Scalar.of(F, 2), "mul") == Scalar.of(F, 1)


def test_rational_sum():
    a, b = Scalar.of(QQ, Fraction(1, 2)), Scalar.of(QQ, Fraction(1, 3))
    assert field_arithmetic(a, b, "add").value == Fraction(5, 6)


def test_gf4_generator_squares_to_t_plus_one():
    F = GF(2, 2)
    t = Scalar(F, F.from_json("t"))
    assert t * t == Scalar(F, F.from_json("t+1"))


def test_sqrt_examples():
    assert sqrt_in_field(Scalar.of(GF(7), 2)) in (Scalar.of(GF(7), 3), Scalar.of(GF(7), 4))
    assert sqrt_in_field(Scalar.of(GF(3), 2)) is None


def test_unitary_conjugation_examples():
    F4 = GF(2, 2, unitary=True)
    assert unitary_conjugate(Scalar(F4, F4.from_json("t"))) == Scalar(F4, F4.from_json("t+1"))
    F9 = GF(3, 2, unitary=True)
    t = Scalar(F9, F9.from_json("t"))
    assert unitary_conjugate(t) == -t


def test_conjugation_needs_quadratic_field():
    with pytest.raises(NoAutomorphism):
        unitary_conjugate(Scalar.of(GF(5), 2))


def test_division_by_zero():
    for F in (GF(5), GF(2, 2), QQ):
        with pytest.raises(DivisionByZero):
            field_arithmetic(Scalar.of(F, 1), Scalar.of(F, 0), "div")


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        field_arithmetic(Scalar.of(GF(3), 1), Scalar.of(GF(5), 1), "add")


def test_out_of_scope_fields():
    for args in [(17,), (4,), (2, 9)]:
        with pytest.raises(UnsupportedField):
            GF(*args)


def test_reducible_modulus_rejected():
    assert not is_irreducible((1, 0, 1), 2)  # t^2 + 1 = (t+1)^2
    with pytest.raises(UnsupportedField):
        GF(2, 2, modulus=(1, 0, 1))


def test_field_names():
    assert parse_field_name("GF(2)") == GF(2)
    assert parse_field_name("GF(9)u") == GF(3, 2, unitary=True)
    assert parse_field_name("Q") is QQ


@pytest.mark.parametrize("F", FINITE, ids=str)
def test_field_axioms_exhaustive(F):
    els = F.elements()
    assert len(els) == F.order
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b != F.zero:
            assert F.mul(F.div(a, b), b) == a
    nonzero = [a for a in els if a != F.zero]
    # multiplicative group is cyclic of order q-1: x^(q-1) = 1
    assert all(F.pow(a, F.order - 1) == F.one for a in nonzero)


@pytest.mark.parametrize("F", FINITE, ids=str)
def test_sqrt_against_enumeration(F):
    squares = {F.mul(a, a) for a in F.elements()}
    for mu in F.elements():
        r = F.sqrt(mu)
        assert (r is None) == (mu not in squares)
        if r is not None:
            assert F.mul(r, r) == mu


@pytest.mark.parametrize("F", [GF(2, 2, unitary=True), GF(3, 2, unitary=True)], ids=str)
def test_conjugation_is_frobenius(F):
    p = F.char
    for a in F.elements():
        assert F.conj(a) == F.pow(a, p)
        assert F.conj(F.conj(a)) == a
    fixed = [a for a in F.elements() if F.conj(a) == a]
    assert len(fixed) == p


@given(st.integers(-50, 50), st.integers(1, 20), st.integers(-50, 50), st.integers(1, 20))
def test_rational_matches_fraction(a, b, c, d):
    x, y = Scalar.of(QQ, Fraction(a, b)), Scalar.of(QQ, Fraction(c, d))
    assert (x * y).value == Fraction(a, b) * Fraction(c, d)
    assert (x - y).value == Fraction(a, b) - Fraction(c, d)


def test_iter_elements_covers_field():
    assert len(list(iter_elements(GF(3, 2)))) == 9
