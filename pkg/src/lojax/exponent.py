"""Gradient-inequality exponents from characteristic polynomials.

If P(w, t) = t^mu + a_1(w) t^(mu-1) + ... + a_mu(w) annihilates (grad f, f),
then |f|^theta <= C ||grad f|| near 0 with theta = max_j j / ord_0 a_j.
This module computes that theta, checks ord_0 a_j >= j + 1 and samples
|f|^theta / ||grad f|| on shrinking spheres as an empirical sanity check.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import INFINITE, Polynomial, initial_form
from .charpoly import CharPoly, OrderEstimate, numeric_coefficients_at, ord_of_coefficient
from .errors import LojaxError, MismatchError
from .fibres import FibreConfig, _rng, random_polydisc, random_sphere
from .milnor import Germ
from .numeric import compile_map, eval_points
from .svgplot import scatter_svg

__all__ = [
    "ExponentCertificate",
    "OrderBoundReport",
    "VieteReport",
    "ShellConfig",
    "ShellReport",
    "gradient_exponent",
    "check_order_bound",
    "vieta_bound_check",
    "empirical_verify",
    "theorem_exponent",
    "shell_verdict",
    "write_shells_csv",
    "shells_svg",
    "BOUNDED",
    "DIVERGENT",
    "INCONCLUSIVE",
]

BOUNDED = "BOUNDED"
DIVERGENT = "DIVERGENT"
INCONCLUSIVE = "INCONCLUSIVE"


def theorem_exponent(mu: int) -> Fraction:
    """The uniform exponent mu / (mu + 1)."""
    return Fraction(mu, mu + 1)


def _orders(P: CharPoly) -> tuple:
    out = []
    for j, c in enumerate(P.coefficients, start=1):
        est = ord_of_coefficient(c)
        out.append(OrderEstimate(j, est.value, est.method, est.slope, est.residual, est.per_ray))
    return tuple(out)


@dataclass(frozen=True)
class ExponentCertificate:
    theta: Fraction
    orders: tuple
    mu: int
    bound_ok: bool
    method: str
    argmax_j: int

    @property
    def theorem_bound(self) -> Fraction:
        return theorem_exponent(self.mu)

    def to_dict(self) -> dict:
        return {
            "theta": str(self.theta),
            "theta_float": float(self.theta),
            "mu": self.mu,
            "bound_ok": self.bound_ok,
            "theorem_bound": str(self.theorem_bound),
            "argmax_j": self.argmax_j,
            "method": self.method,
            "orders": [o.to_dict() for o in self.orders],
        }


def gradient_exponent(germ: Germ, P: CharPoly) -> ExponentCertificate:
    """theta = max over nonzero a_j of j / ord_0 a_j, as an exact rational."""
    orders = _orders(P)
    finite = [(o.j, int(o.value)) for o in orders if o.value != INFINITE]
    if not finite:
        # a_mu is +-prod f(z_i), which cannot vanish identically
        raise LojaxError(f"every coefficient of P vanishes identically for {germ.f}")
    if any(k == 0 for _, k in finite):
        raise LojaxError("a coefficient does not vanish at the origin")
    ratios = [(Fraction(j, k), j) for j, k in finite]
    theta, argmax_j = max(ratios, key=lambda r: (r[0], -r[1]))
    bound_ok = all(k >= j + 1 for j, k in finite)
    return ExponentCertificate(theta, orders, P.mu, bound_ok, P.method, argmax_j)


@dataclass(frozen=True)
class OrderBoundReport:
    ok: bool
    table: tuple
    initial_form_ok: bool | None = None
    initial_form: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "table": [
                {"j": j, "ord": "inf" if o == INFINITE else int(o), "required": r, "ok": ok}
                for j, o, r, ok in self.table
            ],
            "initial_form_ok": self.initial_form_ok,
            "initial_form": self.initial_form,
        }


def check_order_bound(P: CharPoly) -> OrderBoundReport:
    """ord_0 a_j >= j + 1 for every a_j not identically zero.

    For an exact P the equivalent statement in P = t^mu is also tested and the
    two answers must agree.
    """
    table = []
    for o in _orders(P):
        ok = o.value == INFINITE or o.value >= o.j + 1
        table.append((o.j, o.value, o.j + 1, ok))
    ok = all(r[3] for r in table)
    if not P.is_exact:
        return OrderBoundReport(ok, tuple(table))
    poly = P.polynomial()
    init = initial_form(poly)
    lead = Polynomial.constant(1, poly.vars) if P.leading is None else P.leading.in_context(poly.vars)
    t_mu = lead.constant_term() * Polynomial.variable(P.value_var, poly.vars) ** P.mu
    init_ok = init == t_mu
    if init_ok != ok:
        raise MismatchError(f"order table says {ok} but initial form is {init}")
    return OrderBoundReport(ok, tuple(table), init_ok, str(init))


@dataclass(frozen=True)
class VieteReport:
    max_ratio: float
    ok: bool
    samples: int
    tolerance: float = 1e-9

    def to_dict(self) -> dict:
        return {"max_ratio": self.max_ratio, "ok": self.ok, "samples": self.samples, "tolerance": self.tolerance}


def vieta_bound_check(
    germ: Germ,
    P: CharPoly,
    samples=None,
    *,
    n: int = 200,
    radius: float | None = None,
    seed: int = 0,
    cfg: FibreConfig = FibreConfig(),
) -> VieteReport:
    """Largest ratio |f(z)| / (2 max_j |a_j(grad f(z))|^(1/j)) over samples.

    Every root of a monic polynomial is bounded by twice the largest
    |a_j|^(1/j), and f(z) is a root of P(grad f(z), .), so the ratio never
    exceeds 1.  Exact P holds globally, so samples default to the polydisc of
    radius ``cfg.rho``; numeric P is only defined near 0 and defaults to a
    tenth of that.
    """
    m = germ.m
    if samples is None:
        if radius is None:
            radius = cfg.rho if P.is_exact else cfg.rho / 10
        samples = random_polydisc(_rng(seed, [0x71E7]), n, m, radius)
    Z = np.atleast_2d(np.asarray(samples, dtype=np.complex128))
    grad = compile_map(germ.gradient(), germ.vars)
    W = eval_points(grad, Z)
    fz = np.abs(eval_points(compile_map([germ.f], germ.vars), Z)[:, 0])
    if P.is_exact:
        if P.param_vars:
            raise ValueError("family characteristic polynomials need parameter values")
        A = P.evaluate_coefficients(W)
    else:
        A = numeric_coefficients_at(germ, germ.gradient(), W, P.mu, cfg)
    good = ~np.isnan(A).any(axis=1)
    roots = np.abs(A[good]) ** (1.0 / np.arange(1, P.mu + 1))
    bound = 2 * roots.max(axis=1)
    f_good = fz[good]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(bound > 0, f_good / bound, np.where(f_good > 0, np.inf, 0.0))
    mx = float(ratio.max()) if len(ratio) else float("nan")
    return VieteReport(mx, bool(len(ratio)) and mx <= 1 + 1e-9, int(good.sum()))


# ---------------------------------------------------------------------------
# empirical shells


@dataclass(frozen=True)
class ShellConfig:
    radii: tuple = tuple(0.1 * 0.5**k for k in range(8))
    points: int = 500
    seed: int = 0
    refine: int = 4

    def to_dict(self) -> dict:
        return {"radii": list(self.radii), "points": self.points, "seed": self.seed, "refine": self.refine}


@dataclass(frozen=True)
class ShellReport:
    theta: Fraction
    radii: tuple
    sups: tuple
    argmax: tuple
    counts: tuple
    max_f: tuple
    constant: float
    verdict: str
    f_below_one: bool
    warnings: tuple = ()
    log_f: tuple = field(default=(), repr=False)
    log_grad: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "theta": str(self.theta),
            "verdict": self.verdict,
            "constant": self.constant,
            "f_below_one": self.f_below_one,
            "shells": [
                {"radius": r, "sup_q": s, "samples": c, "max_f": mf}
                for r, s, c, mf in zip(self.radii, self.sups, self.counts, self.max_f)
            ],
            "warnings": list(self.warnings),
        }


def shell_verdict(sups: Sequence[float]) -> str:
    """Three-shell heuristic on sups ordered by shrinking radius."""
    last = [float(s) for s in sups[-3:]]
    if len(last) < 3 or not all(np.isfinite(last)):
        return INCONCLUSIVE
    a, b, c = last
    if max(last) <= 1.15 * min(last) or (b <= a and c <= b):
        return BOUNDED
    if a < b < c and c >= 2 * a:
        return DIVERGENT
    return INCONCLUSIVE


def _q(fmap, gmap, theta, Z):
    fz = np.abs(eval_points(fmap, Z)[:, 0])
    gz = np.linalg.norm(eval_points(gmap, Z), axis=1)
    keep = gz > 1e-300
    q = np.zeros(len(Z))
    q[keep] = fz[keep] ** theta / gz[keep]
    return q, fz, gz, keep


def _ascend(fmap, gmap, theta, z, qz, radius, rng, rounds=30, batch=16):
    """Seeded random local ascent of Q on the sphere, starting at z."""
    m = len(z)
    step = 0.25
    for _ in range(rounds):
        cand = z + step * (rng.standard_normal((batch, m)) + 1j * rng.standard_normal((batch, m))) / np.sqrt(2 * m)
        cand *= radius / np.linalg.norm(cand, axis=1, keepdims=True)
        q, *_ = _q(fmap, gmap, theta, cand)
        k = int(np.argmax(q))
        if q[k] > qz:
            z, qz = cand[k], float(q[k])
        else:
            step *= 0.6
    return z, qz


def _shell(fmap, gmap, U, theta, radius, seed, k, refine):
    Z = radius * U
    q, fz, gz, keep = _q(fmap, gmap, theta, Z)
    i = int(np.argmax(q))
    best, qbest = Z[i], float(q[i])
    if refine:
        rng = _rng(seed, [0x5E12, k])
        for i in np.argsort(-q)[:refine]:
            z, qz = _ascend(fmap, gmap, theta, Z[i], float(q[i]), radius, rng)
            if qz > qbest:
                best, qbest = z, qz
    with np.errstate(divide="ignore"):
        return qbest, best, int(keep.sum()), float(fz.max()), np.log(fz[keep]), np.log(gz[keep])


def empirical_verify(
    germ: Germ,
    theta,
    shells: ShellConfig = ShellConfig(),
    *,
    jobs: int = 1,
    gradient_polys: Sequence[Polynomial] | None = None,
) -> ShellReport:
    """Sup of |f|^theta / ||grad f|| over random points of each sphere.

    The best ``shells.refine`` samples per sphere are improved by a short
    seeded local ascent, so the reported sup is less undersampled.

    ``gradient_polys`` replaces the gradient (used for the joint (x, t)
    check of a family, where f is differentiated in every variable anyway).
    """
    theta = Fraction(theta)
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    radii = tuple(float(r) for r in shells.radii)
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("shell radii must be strictly decreasing")
    fmap = compile_map([germ.f], germ.vars)
    gmap = compile_map(list(gradient_polys or germ.gradient()), germ.vars)
    th = float(theta)
    # the same directions on every sphere, so sups vary smoothly with the
    # radius; the coordinate axes are always among them
    U = random_sphere(_rng(shells.seed, [0x5E11]), shells.points, germ.m)
    U[: germ.m] = np.eye(germ.m)[: len(U)]

    def work(k):
        return _shell(fmap, gmap, U, th, radii[k], shells.seed, k, shells.refine)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            res = list(ex.map(work, range(len(radii))))
    else:
        res = [work(k) for k in range(len(radii))]
    sups = tuple(r[0] for r in res)
    max_f = tuple(r[3] for r in res)
    below = all(mf < 1 for mf in max_f)
    verdict = shell_verdict(sups)
    warnings = []
    if not below:
        warnings.append("|f| >= 1 on some shell; smaller exponents are not weaker there")
        if verdict == BOUNDED:
            verdict = INCONCLUSIVE
    return ShellReport(
        theta,
        radii,
        sups,
        tuple(tuple(complex(c) for c in r[1]) for r in res),
        tuple(r[2] for r in res),
        max_f,
        float(max(sups)),
        verdict,
        below,
        tuple(warnings),
        tuple(r[4] for r in res),
        tuple(r[5] for r in res),
    )


def write_shells_csv(path, report: ShellReport):
    """CSV rows: radius, sup Q, samples, max |f|, argmax coordinates."""
    m = len(report.argmax[0]) if report.argmax else 0
    header = ["radius", "sup_q", "samples", "max_f"]
    for k in range(m):
        header += [f"re_z{k + 1}", f"im_z{k + 1}"]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for r, s, c, mf, z in zip(report.radii, report.sups, report.counts, report.max_f, report.argmax):
            row = [repr(r), repr(s), c, repr(mf)]
            for v in z:
                row += [repr(v.real), repr(v.imag)]
            wr.writerow(row)


def shells_svg(report: ShellReport, title: str = "") -> str:
    """Log-log scatter of |f| against ||grad f|| with the line of slope 1/theta
    through the worst sampled point, i.e. |f|^theta = C ||grad f||."""
    series = [
        (f"r={r:.3g}", lg, lf) for r, lf, lg in zip(report.radii, report.log_f, report.log_grad)
    ]
    th = float(report.theta)
    icept = np.log(report.constant) / th if report.constant > 0 else 0.0
    lines = [(f"slope 1/theta = {1 / th:.4g}", 1 / th, float(icept))]
    return scatter_svg(
        series,
        lines,
        title=title or f"theta = {report.theta}, verdict {report.verdict}",
        xlabel="log ||grad f||",
        ylabel="log |f|",
    )
