import random
from fractions import Fraction

import pytest

from lojax import INFINITE, Polynomial, parse_poly
from lojax.basis import (
    DEGREVLEX,
    NEGDEGREVLEX,
    eliminate,
    groebner,
    local_standard_basis,
    normal_form,
    quotient_dimension,
)
from lojax.errors import ResourceCapError

XY = ("x", "y")


def P(text, vars=XY):
    return parse_poly(text, vars)


def test_groebner_of_linear_gradient():
    B = groebner([P("2*x"), P("2*y")], vars=XY)
    assert sorted(str(g) for g in B.generators) == ["x", "y"]
    assert quotient_dimension(B) == 1


def test_groebner_members_reduce_to_zero():
    gens = [P("3*x^2 + y"), P("3*y^2 + x")]
    B = groebner(gens, vars=XY)
    for g in gens:
        assert normal_form(g, B).is_zero()
    assert quotient_dimension(B) == 4  # the node at 0 and three more critical points


def test_local_basis_sees_only_the_origin():
    gens = [P("3*x^2 + y"), P("3*y^2 + x")]
    L = local_standard_basis(gens, vars=XY)
    assert quotient_dimension(L) == 1
    assert not L.order.is_global


def test_local_unit_is_invertible():
    L = local_standard_basis([P("x^2 - x^3", ("x",))], vars=("x",))
    assert L.leading_monomials() == [(2,)]
    assert quotient_dimension(L) == 2


@pytest.mark.parametrize("cs", [(2, 3), (1, 4), (3, 3), (2, 5)])
def test_monomial_ideal_dimension_is_a_box(cs):
    gens = [P(f"x^{cs[0]}"), P(f"y^{cs[1]}")]
    assert quotient_dimension(groebner(gens, vars=XY)) == cs[0] * cs[1]
    assert quotient_dimension(local_standard_basis(gens, vars=XY)) == cs[0] * cs[1]


def test_random_monomial_ideals_global_equals_local():
    rng = random.Random(7)
    for _ in range(10):
        cs = [rng.randint(1, 4) for _ in range(3)]
        vars = ("x", "y", "z")
        gens = [Polynomial.variable(v, vars) ** c for v, c in zip(vars, cs)]
        G = groebner(gens, vars=vars)
        L = local_standard_basis(gens, vars=vars)
        assert quotient_dimension(G) == quotient_dimension(L) == cs[0] * cs[1] * cs[2]
        assert sorted(G.leading_monomials()) == sorted(L.leading_monomials())


def test_infinite_quotient():
    assert quotient_dimension(groebner([P("x")], vars=XY)) == INFINITE
    assert quotient_dimension(local_standard_basis([P("2*x*y"), P("x^2")], vars=XY)) == INFINITE


def test_normal_form_examples():
    assert normal_form(P("x^2"), groebner([P("x")], vars=XY)).is_zero()
    B = groebner([P("x^2"), P("y^2")], vars=XY)
    assert normal_form(P("x*y"), B) == P("x*y")
    J = local_standard_basis([P("3*x^2"), P("3*y^2")], vars=XY)
    assert normal_form(P("y^4"), J).is_zero()


def test_eliminate_closed_forms():
    ring = ("z", "w", "t")
    E = eliminate([P("2*z - w", ring), P("t - z^2", ring)], ("z",), vars=ring)
    assert len(E) == 1
    e = E[0]
    assert e * (1 / e.coefficients_in("t")[1].constant_term()) == P("t - w^2/4", ("w", "t"))
    E = eliminate([P("3*z^2 - w", ring), P("t - z^3", ring)], ("z",), vars=ring)
    e = E[0]
    assert e * (1 / e.coefficients_in("t")[2].constant_term()) == P("t^2 - w^3/27", ("w", "t"))
    assert eliminate([P("x - y")], ("x",), vars=XY) == []


def test_degree_cap_aborts():
    # inputs have degree 5, the reduced basis needs degree 7
    gens = [P("x^4*y - y^3 + x"), P("x*y^4 - x^3 + y")]
    with pytest.raises(ResourceCapError):
        groebner(gens, vars=XY, degree_cap=6)
    assert max(g.degree() for g in groebner(gens, vars=XY, degree_cap=8).generators) == 7


def test_orders_describe_themselves():
    assert DEGREVLEX.is_global and not NEGDEGREVLEX.is_global
    assert isinstance(DEGREVLEX.describe(), str)


def test_gaussian_coefficients():
    i = parse_poly("i", XY)
    B = groebner([P("x^2 + y^2"), P("x - i*y")], vars=XY)
    assert quotient_dimension(B) == INFINITE or quotient_dimension(B) >= 1
    L = local_standard_basis([P("x + i*y"), P("x - i*y")], vars=XY)
    assert quotient_dimension(L) == 1
    assert Fraction(1) == (i * i * -1).constant_term()
