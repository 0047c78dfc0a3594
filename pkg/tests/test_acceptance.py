"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Tolerances and time limits are the pinned acceptance values:
  - one-variable exact ladder under 1 s per case
  - Brieskorn suite under 10 s, both families under 30 s
  - numeric samples within relative 1e-8 of the exact coefficients
  - fitted orders rounded only within 0.1 of an integer
  - Viete ratio at most 1 + 1e-9 over 200 polydisc points
"""

import subprocess
import sys
import os
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from lojax import Polynomial, initial_form
from lojax.charpoly import charpoly_exact, charpoly_numeric, ord_of_coefficient, verify_annihilation
from lojax.exponent import BOUNDED, check_order_bound, gradient_exponent, theorem_exponent, vieta_bound_check
from lojax.family import (
    CONSTANT_ON_GRID,
    NON_CONSTANT,
    PROVED,
    Unfolding,
    default_grid,
    mu_constancy_grid,
    mu_constancy_symbolic,
    semicontinuity_check,
    stoll_check,
    uniform_exponent_verify,
)
from lojax.milnor import Germ, milnor_number

from germs import BRIESKORN, brieskorn, random_forms
from oracles import brieskorn_mu, closed_form_charpoly, monomial_power_case

pytestmark = pytest.mark.acceptance

ROOT = Path(__file__).resolve().parent.parent
RELATIVE = 1e-8
FIT_GUARD = 0.1
VIETE_SLACK = 1e-9


@pytest.fixture
def report(capsys):
    """Run a criterion body and print exactly one PASS/FAIL line for it."""

    def _run(number, title, body):
        t0 = time.perf_counter()
        err = None
        try:
            detail = body()
        except Exception as exc:  # reported, then re-raised for pytest
            err = exc
        dt = time.perf_counter() - t0
        with capsys.disabled():
            status = "PASS" if err is None else "FAIL"
            msg = detail if err is None else f"{type(err).__name__}: {err}"
            print(f"\n[criterion {number}] {status} {title} ({dt:.2f} s) {msg}")
        if err is not None:
            raise err

    return _run


def _suite_germs():
    ladder = [Germ.parse(f"z^{d}") for d in range(2, 7)]
    return ladder, [brieskorn(a, b) for a, b in BRIESKORN]


def test_criterion_1_one_variable_ladder(report):
    def body():
        for d in range(2, 7):
            t0 = time.perf_counter()
            g = Germ.parse(f"z^{d}")
            P = charpoly_exact(g)
            cert = gradient_exponent(g, P)
            dt = time.perf_counter() - t0
            assert dt < 1.0, f"z^{d} took {dt:.2f} s"
            assert milnor_number(g) == d - 1
            w, t = P.w_vars[0], P.value_var
            ctx = (w, t)
            expected = Polynomial.variable(t, ctx) ** (d - 1) - (Polynomial.variable(w, ctx) / d) ** d
            assert P.polynomial() == expected
            # the independent resultant is proportional to P
            for w0, t0_ in [(Fraction(3, 2), Fraction(-1, 3)), (Fraction(-2), Fraction(5, 7))]:
                res = monomial_power_case(d, w0, t0_)
                ours = closed_form_charpoly(d, w0, t0_)
                assert res == ours * monomial_power_case(d, 0, 1) / closed_form_charpoly(d, 0, 1)
            assert cert.theta == Fraction(d - 1, d) == theorem_exponent(d - 1)
        return "d = 2..6"

    report(1, "one-variable ladder", body)


def test_criterion_2_brieskorn_suite(report):
    def body():
        t0 = time.perf_counter()
        for a, b in BRIESKORN:
            g = brieskorn(a, b)
            mu = milnor_number(g)
            assert mu == brieskorn_mu((a, b))
            P = charpoly_exact(g)
            rep = check_order_bound(P)
            assert rep.ok and rep.initial_form_ok
            tmu = Polynomial.variable(P.value_var, P.coefficient_vars + (P.value_var,)) ** mu
            assert initial_form(P.polynomial()) == tmu
            assert gradient_exponent(g, P).theta <= Fraction(mu, mu + 1)
        dt = time.perf_counter() - t0
        assert dt < 10.0, f"suite took {dt:.2f} s"
        return f"{len(BRIESKORN)} germs"

    report(2, "Brieskorn suite", body)


def test_criterion_3_annihilation_identity(report):
    def body():
        ladder, bries = _suite_germs()
        corpus = ladder + bries + random_forms(20)
        for g in corpus:
            P = charpoly_exact(g)
            rep = verify_annihilation(P, g.f, g.gradient())
            assert rep.ok and rep.method == "exact" and rep.max_residual == 0.0, str(g.f)
        return f"{len(corpus)} exact identities (20 random dense forms)"

    report(3, "annihilation identity", body)


def test_criterion_4_numeric_exact_cross_check(report):
    def body():
        worst = 0.0
        for a, b in BRIESKORN:
            g = brieskorn(a, b)
            P = charpoly_exact(g)
            N = charpoly_numeric(g)
            for j in range(1, P.mu + 1):
                est = ord_of_coefficient(N.coefficient(j))
                if est.slope is not None:
                    assert abs(est.slope - est.value) < FIT_GUARD
                assert est.value == ord_of_coefficient(P.coefficient(j)).value, (a, b, j)
            for tab in N.coefficients[0].tables:
                if not tab.usable[0]:
                    continue
                exact = P.evaluate_coefficients(tab.radii[0] * tab.direction)[0]
                got = tab.values[0]
                nz = exact != 0
                rel = np.abs(got - exact)[nz] / np.abs(exact)[nz]
                assert rel.max() <= RELATIVE, (a, b, tab.ray)
                assert np.abs(got[~nz]).max(initial=0) <= RELATIVE * np.abs(exact).max()
                worst = max(worst, float(rel.max()))
        return f"worst relative deviation {worst:.1e}"

    report(4, "numeric/exact cross-check", body)


def test_criterion_5_hesse_family(report):
    def body():
        t0 = time.perf_counter()
        u = Unfolding.parse("x^3 + y^3 + t*x*y", ("x", "y"), ("t",))
        grid = [(0,), (Fraction(1, 8),), (Fraction(1, 4),)]
        rep = mu_constancy_grid(u, grid)
        assert rep.mu == (4, 1, 1) and rep.verdict == NON_CONSTANT
        semi = semicontinuity_check(u, grid, constancy=rep)
        assert semi.ok
        fractions = []
        for p in grid[1:]:
            s = stoll_check(u, p, samples=50)
            assert s.mu0 == 4 and s.mu_t == 1 and s.ok, s
            fractions.append(s.fraction)
        dt = time.perf_counter() - t0
        assert dt < 30.0, f"took {dt:.2f} s"
        return f"mu table (4, 1, 1), sheet-count fractions {fractions}"

    report(5, "Hesse family", body)


def test_criterion_6_morse_family(report):
    def body():
        t0 = time.perf_counter()
        u = Unfolding.parse("x^2 + y^2 + t*x*y", ("x", "y"), ("t",))
        grid = default_grid(1)
        assert all(abs(complex(p[0])) <= 0.25 for p in grid)
        rep = mu_constancy_grid(u, grid)
        assert rep.verdict == CONSTANT_ON_GRID
        assert mu_constancy_symbolic(u).verdict == PROVED
        uni = uniform_exponent_verify(u, grid, constancy=rep)
        assert uni.theta == Fraction(1, 2)
        assert all(v == BOUNDED for v in uni.verdicts) and uni.joint_verdict == BOUNDED
        assert uni.shared_constant == max(uni.constants) and np.isfinite(uni.shared_constant)
        dt = time.perf_counter() - t0
        assert dt < 30.0, f"took {dt:.2f} s"
        return f"{len(grid)} grid points, shared C = {uni.shared_constant:.4f}"

    report(6, "Morse family", body)


def test_criterion_7_viete_bound(report):
    def body():
        ladder, bries = _suite_germs()
        worst = 0.0
        for g in ladder + bries:
            rep = vieta_bound_check(g, charpoly_exact(g), n=200)
            assert rep.samples == 200 and rep.max_ratio <= 1 + VIETE_SLACK, str(g.f)
            worst = max(worst, rep.max_ratio)
        return f"max ratio {worst:.6f}"

    report(7, "Viete bound", body)


def _cli(*argv):
    env = dict(os.environ)
    env.pop("LOJAX_SEED", None)
    return subprocess.run(
        [sys.executable, "-m", "lojax.cli", *argv, "--seed", "1234"],
        capture_output=True,
        env=env,
        check=False,
        cwd=ROOT,
    )


def test_criterion_8_determinism(report):
    commands = [
        ("milnor", "--expr", "x^3+y^3"),
        ("charpoly", "--expr", "z^2", "--numeric"),
        ("exponent", "inputs/cusp_node.json", "--auto", "--verify", "--points", "100"),
        ("verify", "inputs/brieskorn_3_4.json", "--points", "100"),
        ("family", "inputs/hesse_family.json", "--points", "100"),
    ]

    def body():
        for argv in commands:
            a, b = _cli(*argv), _cli(*argv)
            assert a.returncode == b.returncode == 0, (argv, a.stderr.decode())
            assert a.stdout == b.stdout, argv
        return f"{len(commands)} commands byte-identical"

    report(8, "determinism", body)


def test_criterion_9_theorem_range(report):
    def body():
        ladder, bries = _suite_germs()
        certs = 0
        for g in ladder + bries + random_forms(20):
            mu = milnor_number(g)
            bound = theorem_exponent(mu)
            assert Fraction(1, 2) <= bound < 1
            for P in (charpoly_exact(g),):
                cert = gradient_exponent(g, P)
                if cert.bound_ok:
                    assert 0 < cert.theta <= bound
                    certs += 1
        for mu in range(1, 200):
            assert Fraction(1, 2) <= theorem_exponent(mu) < 1
        return f"{certs} certificates in range"

    report(9, "theorem range", body)
