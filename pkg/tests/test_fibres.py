import numpy as np
import pytest

from lojax import parse_poly
from lojax.fibres import FibreConfig, newton_refine, solve_fibre, track_ray
from lojax.milnor import Germ, milnor_number


def grad(text):
    g = Germ.parse(text)
    return g, g.gradient(), milnor_number(g)


def residuals(G, fib):
    from lojax import evaluate
    return [max(abs(evaluate(p, z) - w) for p, w in zip(G, fib.w)) for z in fib.points]


@pytest.mark.parametrize("text", ["x^3 + y^4", "x^2*y + y^4", "x^3 + y^3 + x*y", "x^4 + y^4 + x^2*y^2"])
def test_fibre_has_mu_points_with_small_residual(text):
    _, G, mu = grad(text)
    w = np.array([0.01 + 0.003j, -0.004 + 0.007j])
    fib = solve_fibre(G, w, mu)
    assert fib.complete and len(fib) == mu
    assert max(residuals(G, fib)) <= 1e-10
    assert fib.residual <= FibreConfig().tol


def test_fibres_are_deterministic():
    _, G, mu = grad("x^3 + y^4")
    w = np.array([0.02, 0.01j])
    a = solve_fibre(G, w, mu, FibreConfig(seed=5))
    b = solve_fibre(G, w, mu, FibreConfig(seed=5))
    np.testing.assert_array_equal(a.points, b.points)


def test_far_roots_trigger_halving():
    # the node x^3+y^3+xy has three more critical points near |z| = 1/3
    _, G, mu = grad("x^3 + y^3 + x*y")
    fib = solve_fibre(G, np.array([1e-3, 2e-3j]), mu, FibreConfig(rho=1.0))
    assert len(fib) == 1 and fib.complete
    assert any(f.startswith("halved_rho") for f in fib.flags)


def test_track_ray_continues_and_keeps_count():
    _, G, mu = grad("x^3 + y^5")
    radii = [0.1 / 2**k for k in range(6)]
    fibs = track_ray(G, np.array([0.3 + 0.1j, -0.2 + 0.5j]), radii, mu)
    assert all(f.complete and len(f) == mu for f in fibs)
    assert all(f.status == "continued" for f in fibs[1:])
    for a, b in zip(fibs, fibs[1:]):
        assert np.abs(b.points).max() < np.abs(a.points).max()


def test_track_ray_rejects_increasing_radii():
    _, G, mu = grad("x^2 + y^2")
    with pytest.raises(ValueError):
        track_ray(G, np.array([1, 1]), [0.1, 0.2], mu)


def test_point_on_discriminant_is_flagged():
    # x^3+y^3: the fibre over a coordinate axis collapses roots together
    _, G, mu = grad("x^3 + y^3")
    fib = solve_fibre(G, np.array([0.01, 0.0]), mu)
    assert not fib.complete


def test_newton_refine_single_point():
    G = [parse_poly("2*x", ("x",))]
    z = newton_refine(G, [0.5], [0.1])
    assert z is not None and abs(z[0] - 0.25) < 1e-14


def test_config_validation():
    with pytest.raises(ValueError):
        FibreConfig(rho=0)
    with pytest.raises(ValueError):
        FibreConfig(tol=1e-6, dedupe=1e-8)
    assert FibreConfig().starts(3) == 600
