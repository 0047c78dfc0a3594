from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lojax import INFINITE, Polynomial, evaluate, gradient, initial_form, ord_zero, parse_poly, substitute

VARS = ("x", "y")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda d: Polynomial(d, VARS))
points = st.tuples(coeffs, coeffs)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p - p == Polynomial.zero(VARS)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_leibniz_rule(p, q):
    for v in VARS:
        assert (p * q).derivative(v) == p.derivative(v) * q + p * q.derivative(v)


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(p, q, z):
    assert evaluate(p * q, z) == pytest.approx(evaluate(p, z) * evaluate(q, z), rel=1e-12, abs=1e-12)
    bound = substitute(p, dict(zip(VARS, z)))
    assert bound.is_constant()
    assert complex(bound.constant_term()) == pytest.approx(evaluate(p, z), rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_homogeneous_decomposition(p):
    total = Polynomial.zero(VARS)
    for d, part in p.homogeneous_parts().items():
        assert part.is_homogeneous() and part.degree() == d
        total = total + part
    assert total == p


def test_ord_and_initial_form():
    p = parse_poly("x^2*y + y^3 - x^5", VARS)
    assert ord_zero(p) == 3
    assert initial_form(p) == parse_poly("x^2*y + y^3", VARS)
    assert ord_zero(Polynomial.zero(VARS)) == INFINITE
    with pytest.raises(ValueError):
        initial_form(Polynomial.zero(VARS))


def test_gradient_and_contexts():
    p = parse_poly("x^3+y^3+x*y", VARS)
    assert [str(g) for g in gradient(p)] == ["3*x^2 + y", "3*y^2 + x"]
    q = parse_poly("t", ["t"])
    s = p + q
    assert s.vars == ("x", "y", "t")
    assert s.degree_in("t") == 1


def test_substitute_polynomial_into_polynomial():
    p = parse_poly("w^2/4 - t", ["w", "t"])
    z = Polynomial.variable("z", ["z"])
    out = substitute(p, {"w": 2 * z, "t": z**2})
    assert out.is_zero()


def test_coefficients_in_variable():
    p = parse_poly("t^2 - w^3/27 + w*t", ["w", "t"])
    c = p.coefficients_in("t")
    assert c[2] == 1 and c[1] == parse_poly("w", ["w", "t"]) and c[0] == parse_poly("-w^3/27", ["w", "t"])


def test_scalar_equality_and_hash():
    assert Polynomial.constant(Fraction(3, 2), VARS) == Fraction(3, 2)
    assert hash(parse_poly("x+y", VARS)) == hash(parse_poly("y+x", VARS))
