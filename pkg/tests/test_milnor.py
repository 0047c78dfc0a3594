import itertools

import pytest

from lojax.errors import NotIsolatedError, PreconditionError
from lojax.milnor import Germ, is_isolated_singularity, milnor_number

from oracles import brieskorn_mu


@pytest.mark.parametrize("a,b", list(itertools.product(range(2, 6), repeat=2)))
def test_brieskorn_two_variables(a, b):
    g = Germ.parse(f"x^{a} + y^{b}")
    assert milnor_number(g) == brieskorn_mu((a, b))


@pytest.mark.parametrize("exps", [(2, 2, 2), (2, 3, 4), (3, 3, 3)])
def test_brieskorn_three_variables(exps):
    text = " + ".join(f"{v}^{e}" for v, e in zip("xyz", exps))
    assert milnor_number(Germ.parse(text)) == brieskorn_mu(exps)


@pytest.mark.parametrize(
    "text,mu",
    [
        ("x^2", 1),
        ("x^7", 6),
        ("x^3 + y^3 + x*y", 1),  # only the node at 0 counts, not the far critical points
        ("x^2*y + y^4", 5),  # D5
        ("x^3 + y^4", 6),  # E6
        ("x^3 + x*y^3", 7),  # E7
        ("x^3 + y^5", 8),  # E8
        ("x^4 + y^4 + x^2*y^2", 9),
        ("(x^2 - y^3)*(1 + x)", 2),
    ],
)
def test_known_milnor_numbers(text, mu):
    assert milnor_number(Germ.parse(text)) == mu


def test_non_isolated():
    g = Germ.parse("x^2*y")
    assert not is_isolated_singularity(g)
    with pytest.raises(NotIsolatedError):
        milnor_number(g)


def test_regular_point_has_mu_zero():
    assert milnor_number(Germ.parse("x + y^2")) == 0


def test_germ_must_vanish():
    with pytest.raises(PreconditionError):
        Germ.parse("x^2 + 1")


def test_mu_is_cached_and_coordinate_invariant():
    g = Germ.parse("x^3 + y^4")
    assert g.mu is None
    milnor_number(g)
    assert g.mu == 6
    # a linear change of coordinates does not change mu
    h = Germ.parse("(x + 2*y)^3 + (y - x)^4")
    assert milnor_number(h) == 6
