from fractions import Fraction
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvechar.poly import FrickePolynomial, TPoly
from curvechar.quadratic import QuadraticIrrational, rational_sqrt

x, y, z = (FrickePolynomial.var(i) for i in range(3))
ONE = FrickePolynomial.constant(1)

monos = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monos, st.integers(-5, 5), max_size=6).map(FrickePolynomial)
points = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))


def test_render_order():
    p = x * x + y * y + z * z - x * y * z - FrickePolynomial.constant(2)
    assert str(p) == "-x*y*z + x^2 + y^2 + z^2 - 2"


def test_render_zero_and_constants():
    assert str(FrickePolynomial()) == "0"
    assert str(FrickePolynomial.constant(-3)) == "-3"
    assert str(x * y - z) == "x*y - z"


def test_zero_coefficients_dropped():
    assert (x - x).terms == {}
    assert FrickePolynomial({(1, 0, 0): 0}) == 0


@given(polys, polys, points)
def test_ring_homomorphism(p, q, pt):
    assert (p + q)(*pt) == p(*pt) + q(*pt)
    assert (p - q)(*pt) == p(*pt) - q(*pt)
    assert (p * q)(*pt) == p(*pt) * q(*pt)


@given(polys, st.integers(0, 2))
def test_times_var_matches_multiplication(p, i):
    assert p.times_var(i) == p * FrickePolynomial.var(i)


@given(polys, polys)
def test_equal_polys_render_equal(p, q):
    assert (p == q) == (str(p) == str(q))
    if p == q:
        assert hash(p) == hash(q)


def test_tpoly_arithmetic():
    T = TPoly.T()
    p = (T * T + 1) * (T - 2)
    assert p.degree() == 3
    assert p.coeff(0) == -2 and p.coeff(3) == 1
    assert p(Fraction(1, 2)) == Fraction(5, 4) * Fraction(-3, 2)
    assert T - T == TPoly()


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(2) is None
    assert rational_sqrt(-4) is None
    assert rational_sqrt(0) == 0


q_parts = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@given(q_parts, q_parts, q_parts, q_parts)
def test_quadratic_field_arithmetic_matches_floats(a, b, c, d):
    u, v = QuadraticIrrational(a, b, 5), QuadraticIrrational(c, d, 5)
    r5 = math.sqrt(5)
    fu, fv = float(a) + float(b) * r5, float(c) + float(d) * r5
    assert float(u + v) == pytest.approx(fu + fv, abs=1e-9)
    assert float(u * v) == pytest.approx(fu * fv, rel=1e-9, abs=1e-9)
    if v != 0:
        assert (u / v) * v == u


@given(q_parts, q_parts)
def test_quadratic_sign_exact(a, b):
    u = QuadraticIrrational(a, b, 7)
    # [DERIVED] sign from a high-precision float evaluation, away from zero
    f = float(a) + float(b) * math.sqrt(7)
    if abs(f) > 1e-9:
        assert u.sign() == (1 if f > 0 else -1)
    if u.sign() == 0:
        assert a == 0 and b == 0


def test_quadratic_near_cancellation():
    # 2 - sqrt(4 - 1e-30) is tiny and positive
    d = Fraction(4) - Fraction(1, 10**30)
    u = QuadraticIrrational(2, -1, d)
    assert u.sign() == 1


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        QuadraticIrrational(0, 1, 2) + QuadraticIrrational(0, 1, 3)
