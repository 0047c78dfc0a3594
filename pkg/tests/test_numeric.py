import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lojax import evaluate, parse_poly
from lojax import numeric
from lojax.numeric import available_backends, compile_map, compile_system, eval_points, set_backend

XY = ("x", "y")
POLYS = [parse_poly(t, XY) for t in ["x^3 + 2*x*y - y^2/4", "(1+i)*x^5*y^2 - 7", "0"]]


@pytest.fixture(params=available_backends())
def backend(request):
    prev = set_backend(request.param)
    yield request.param
    set_backend(prev)


def test_eval_matches_reference(backend):
    rng = np.random.default_rng(1)
    Z = rng.standard_normal((50, 2)) + 1j * rng.standard_normal((50, 2))
    V = eval_points(compile_map(POLYS, XY), Z)
    ref = np.array([[evaluate(p, z) for p in POLYS] for z in Z])
    np.testing.assert_allclose(V, ref, rtol=1e-13, atol=1e-13)


def test_newton_converges_to_a_root(backend):
    sys = compile_system([parse_poly("x^2 - y", XY), parse_poly("y^2 - 2", XY)], XY)
    Z, ok, resid = sys.newton(np.zeros(2), np.array([[1.1 + 0j, 1.5 + 0j]]), 1e-13, 50)
    assert ok[0] and resid[0] <= 1e-13
    np.testing.assert_allclose(Z[0], [2**0.25, 2**0.5], rtol=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        eval_points(compile_map(POLYS, XY), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        compile_system(POLYS, XY)


def test_unknown_backend():
    with pytest.raises(ValueError):
        set_backend("fortran")


@pytest.mark.skipif(len(available_backends()) < 2, reason="compiled kernels not built")
@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_backends_agree(seed):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((20, 2)) + 1j * rng.standard_normal((20, 2))
    pm = compile_map(POLYS, XY)
    sys = compile_system(POLYS[:2], XY)
    W = rng.standard_normal(2) + 0j
    out = {}
    for name in ("python", "compiled"):
        prev = set_backend(name)
        try:
            out[name] = (eval_points(pm, Z), sys.newton(W, Z, 1e-12, 30))
        finally:
            set_backend(prev)
    np.testing.assert_allclose(out["python"][0], out["compiled"][0], rtol=1e-14, atol=1e-14)
    (zp, okp, _), (zc, okc, _) = out["python"][1], out["compiled"][1]
    assert (okp == okc).all()
    np.testing.assert_allclose(zp[okp], zc[okc], rtol=1e-10, atol=1e-10)


def test_backend_name_reported():
    assert numeric.backend_name() in ("python", "compiled")


def test_pure_python_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, LOJAX_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from lojax.numeric import backend_name; print(backend_name())"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"
