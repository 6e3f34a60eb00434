import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qsymfilt.scalars import (
    ONE,
    ZERO,
    CycloNumber,
    cyclotomic_polynomial,
    euler_phi,
    format_cyclo,
    rational_sqrt,
    zeta,
)

ORDERS = [1, 2, 3, 4, 5, 6, 8, 12]
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyclo(draw, order=None):
    order = order or draw(st.sampled_from(ORDERS))
    coeffs = draw(st.lists(fractions, min_size=order, max_size=order))
    return CycloNumber.coerce({"order": order, "coeffs": coeffs})


def close(a, b, tol=1e-9):
    return abs(complex(a) - complex(b)) <= tol


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert [euler_phi(n) for n in (1, 2, 3, 4, 5, 6, 12)] == [1, 1, 2, 2, 4, 2, 4]


def test_roots_of_unity():
    i = zeta(4)
    assert i * i == CycloNumber.rational(-1)
    assert zeta(3) * zeta(3) * zeta(3) == ONE
    assert zeta(3) + zeta(3, 2) + ONE == ZERO
    assert close(zeta(5, 2).to_complex(), cmath.exp(4j * cmath.pi / 5))


def test_mixed_orders_promote():
    x = zeta(4) + zeta(3)
    assert x.order == 12
    assert close(x.to_complex(), 1j + cmath.exp(2j * cmath.pi / 3))


def test_coerce_accepts_reduced_and_raw_coefficients():
    raw = CycloNumber.coerce({"order": 4, "coeffs": [0, 1, 0, 0]})
    reduced = CycloNumber.coerce({"order": 4, "coeffs": [0, 1]})
    assert raw == reduced == zeta(4)
    with pytest.raises(ValueError):
        CycloNumber.coerce({"order": 4, "coeffs": [0, 1, 0, 0, 0]})


def test_formatting():
    assert format_cyclo(CycloNumber.rational(Fraction(-1, 4))) == "-1/4"
    assert format_cyclo(zeta(4)) == "z4"
    assert format_cyclo(ONE - zeta(4)) == "1 - z4"


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(2) is None


@settings(max_examples=60, deadline=None)
@given(cyclo(), cyclo(), cyclo())
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert close((a * b).to_complex(), a.to_complex() * b.to_complex(), 1e-6)


@settings(max_examples=60, deadline=None)
@given(cyclo())
def test_inverse_and_conjugate(a):
    assert close(a.conjugate().to_complex(), a.to_complex().conjugate(), 1e-6)
    if a:
        assert a * a.inverse() == ONE
    assert (a * a.conjugate()).to_complex().imag == pytest.approx(0, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(cyclo(12), st.sampled_from([1, 5, 7, 11]))
def test_galois_is_a_field_automorphism(a, k):
    b = a * a + ONE
    assert (a * b).galois(k) == a.galois(k) * b.galois(k)
    assert (a + b).galois(k) == a.galois(k) + b.galois(k)
