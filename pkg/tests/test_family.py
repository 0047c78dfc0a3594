from fractions import Fraction

import pytest

from lojax import parse_poly
from lojax.errors import MismatchError, PreconditionError, SemicontinuityViolation
from lojax.exponent import BOUNDED
from lojax.family import (
    CONSTANT_ON_GRID,
    ERROR,
    NON_CONSTANT,
    PROVED,
    UNDECIDED,
    Unfolding,
    analyze_family,
    build_G,
    default_grid,
    family_charpoly,
    hartogs_bound_check,
    mu_constancy_grid,
    mu_constancy_symbolic,
    mu_of_G,
    semicontinuity_check,
    specialization_check,
    specialize,
    stoll_check,
    uniform_exponent_verify,
)
from lojax.field import I

X, T = ("x", "y"), ("t",)
HESSE_GRID = [(0,), (Fraction(1, 8),), (Fraction(1, 4),)]


@pytest.fixture(scope="module")
def morse():
    return Unfolding.parse("x^2 + y^2 + t*x*y", X, T)


@pytest.fixture(scope="module")
def hesse():
    return Unfolding.parse("x^3 + y^3 + t*x*y", X, T)


def test_unfolding_requires_vanishing_on_t_axis():
    with pytest.raises(PreconditionError, match=r"f\(0, t\) = t"):
        Unfolding.parse("x + t", ("x",), T)
    with pytest.raises(ValueError):
        Unfolding.parse("x^2", ("x",), ("x",))


def test_slices_and_G(morse):
    assert str(morse.slice((Fraction(1, 4),)).f) == "x^2 + 1/4*x*y + y^2"
    assert morse.mu0 == 1
    assert len(build_G(morse)) == 3
    assert mu_of_G(morse) == morse.mu0


def test_default_grid():
    g = default_grid(1)
    assert g[0] == (0,) and len(g) == 6
    assert (I / 8,) in g
    assert len(default_grid(2)) == 25 and default_grid(2)[0] == (0, 0)


def test_morse_constancy(morse):
    rep = mu_constancy_grid(morse)
    assert rep.verdict == CONSTANT_ON_GRID and set(rep.mu) == {1}
    sym = mu_constancy_symbolic(morse)
    assert sym.verdict == PROVED


def test_hesse_is_not_constant(hesse):
    rep = mu_constancy_grid(hesse, HESSE_GRID)
    assert rep.mu == (4, 1, 1) and rep.verdict == NON_CONSTANT
    assert mu_constancy_symbolic(hesse).verdict == UNDECIDED


def test_non_isolated_slice_gives_error():
    u = Unfolding.parse("x^2 + y^2 - 8*t*y^2", X, T)  # f_{1/8} = x^2
    rep = mu_constancy_grid(u, [(Fraction(1, 8),)])
    assert rep.verdict == ERROR


def test_semicontinuity(hesse):
    rep = semicontinuity_check(hesse, HESSE_GRID)
    assert rep.ok and all(v == BOUNDED for v in rep.verdicts)
    up = Unfolding.parse("t*x^2 + x^4 + y^2", ("x", "y"), T)
    # mu jumps from 3 at t = 0 down to 1; the reverse direction is a violation
    assert semicontinuity_check(up, [(0,), (Fraction(1, 8),)]).ok
    down = Unfolding.parse("(1 - 8*t)*x^2 + x^4 + y^2", ("x", "y"), T)
    with pytest.raises(SemicontinuityViolation):
        semicontinuity_check(down, [(0,), (Fraction(1, 8),)])


def test_uniform_exponent_on_morse(morse):
    rep = uniform_exponent_verify(morse)
    assert rep.theta == Fraction(1, 2)
    assert rep.ok and all(v == BOUNDED for v in rep.verdicts) and rep.joint_verdict == BOUNDED
    assert rep.shared_constant == max(rep.constants)


def test_uniform_needs_constancy(hesse):
    with pytest.raises(PreconditionError):
        uniform_exponent_verify(hesse, HESSE_GRID)


def test_family_charpoly_specializes(morse):
    P = family_charpoly(morse)
    assert P.param_vars == ("t",)
    for t0 in [(0,), (Fraction(1, 8),), (I / 8,)]:
        rep = specialization_check(morse, P, t0)
        assert rep.ok
    Q = specialize(P, (0,))
    assert not Q.param_vars and Q.mu == 1


def test_family_charpoly_refuses_non_constant(hesse):
    with pytest.raises(PreconditionError):
        family_charpoly(hesse)
    with pytest.raises(MismatchError):
        family_charpoly(hesse, check_constancy=False)


def test_hartogs(morse):
    rep = hartogs_bound_check(family_charpoly(morse), points=50)
    assert rep.ok


@pytest.mark.parametrize("t0", [(Fraction(1, 8),), (Fraction(1, 4),)])
def test_stoll_sheet_count(hesse, t0):
    rep = stoll_check(hesse, t0)
    assert rep.mu0 == 4 and rep.mu_t == 1
    assert rep.ok and rep.fraction >= 0.95


def test_analyze_morse(morse):
    rep = analyze_family(morse, stoll_samples=10)
    assert not rep.hard_failure
    d = rep.to_dict()
    assert d["constancy"]["verdict"] == CONSTANT_ON_GRID and d["symbolic"]["verdict"] == PROVED
    assert d["uniform_theta"] == "1/2"


def test_analyze_hesse(hesse):
    rep = analyze_family(hesse, HESSE_GRID, stoll_samples=20)
    assert not rep.hard_failure
    assert rep.constancy.verdict == NON_CONSTANT and rep.semicontinuity.ok
    assert rep.uniform is None and len(rep.stoll) == 2


def test_parse_with_gaussian_coefficient():
    u = Unfolding(parse_poly("x^2 + i*t*x", ("x", "t")), ("x",), ("t",))
    assert u.mu0 == 1
