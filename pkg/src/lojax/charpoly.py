"""Characteristic polynomial of f with respect to a finite map germ g.

For generic w near 0 the fibre g^{-1}(w) has mu points z_1..z_mu and

    P(w, t) = prod_i (t - f(z_i)) = t^mu + a_1(w) t^(mu-1) + ... + a_mu(w),

so a_j = (-1)^j e_j(f(z_1), ..., f(z_mu)).  The exact path obtains P by
eliminating z from <g(z) - w, t - f(z)>; the numeric path samples the a_j
along rays w = s*w0 from numerically solved fibres.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .algebra import INFINITE, Polynomial, gradient, ord_zero, substitute
from .basis import (
    DEFAULT_DEGREE_CAP,
    eliminate,
    groebner,
    local_standard_basis,
    quotient_dimension,
)
from .errors import (
    FitUnstable,
    GlobalLocalMismatch,
    IdentityFailed,
    NotIsolatedError,
    TooFewSamples,
)
from .fibres import FibreConfig, _rng, as_system, random_sphere, solve_fibre, track_ray
from .milnor import Germ, milnor_number
from .numeric import compile_map, eval_points

__all__ = [
    "CharPoly",
    "RayTable",
    "SampledCoefficient",
    "OrderEstimate",
    "charpoly_exact",
    "charpoly_numeric",
    "ord_of_coefficient",
    "verify_annihilation",
    "AnnihilationReport",
    "default_radii",
    "default_rays",
    "map_multiplicity",
    "numeric_coefficients_at",
    "write_samples_csv",
    "fresh_names",
    "ZERO_FLOOR",
    "FIT_GUARD",
]

# |a_j| below ZERO_FLOOR * C(mu, j) * max|f|^j counts as a rounding-level zero
ZERO_FLOOR = 1e-9
FIT_GUARD = 0.1


def fresh_names(base: str, taken: Sequence[str], count: int) -> tuple:
    """``count`` names derived from ``base`` avoiding ``taken``: w or w1..wk."""
    taken = set(taken)
    stem = base
    while True:
        names = (stem,) if count == 1 else tuple(f"{stem}{k + 1}" for k in range(count))
        if not taken.intersection(names):
            return names
        stem += "_"


def default_radii(n: int = 8, start: float = 0.1, ratio: float = 0.5) -> list:
    return [start * ratio**k for k in range(n)]


def default_rays(m: int, seed: int, n_random: int = 3) -> np.ndarray:
    """``n_random`` seeded random unit directions plus two coordinate ones."""
    rng = _rng(seed, [0x5A75])
    rand = random_sphere(rng, n_random, m)
    coord = np.zeros((2, m), dtype=np.complex128)
    coord[0, 0] = 1
    if m > 1:
        coord[1, 1] = 1
    else:
        coord[1, 0] = 1j
    return np.vstack([rand, coord])


@dataclass(frozen=True)
class RayTable:
    """Samples of a_1..a_mu along one ray (NaN where the fibre was incomplete)."""

    ray: int
    direction: np.ndarray
    radii: np.ndarray
    values: np.ndarray
    usable: np.ndarray
    scale: np.ndarray
    fibres: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class SampledCoefficient:
    j: int
    mu: int
    tables: tuple


@dataclass(frozen=True)
class OrderEstimate:
    j: int
    value: object
    method: str
    slope: float | None = None
    residual: float | None = None
    per_ray: tuple = ()

    @property
    def is_infinite(self) -> bool:
        return self.value == INFINITE

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "value": "inf" if self.is_infinite else int(self.value),
            "method": self.method,
            "slope": self.slope,
            "residual": self.residual,
            "per_ray": [list(r) for r in self.per_ray],
        }


@dataclass(frozen=True)
class CharPoly:
    """Monic degree-mu polynomial in the value variable.

    ``coefficients[j-1]`` is a_j: a Polynomial in ``w_vars + param_vars`` on the
    exact path, a :class:`SampledCoefficient` on the numeric path.  Family
    eliminants whose leading coefficient is a unit of the local ring but not
    a constant keep it in ``leading``; then a_j = coefficients[j-1] / leading.
    """

    mu: int
    method: str
    w_vars: tuple
    value_var: str
    coefficients: tuple
    param_vars: tuple = ()
    leading: Polynomial | None = None
    source: str = ""
    warnings: tuple = ()

    @property
    def is_exact(self) -> bool:
        return self.method == "exact"

    @property
    def coefficient_vars(self) -> tuple:
        return self.w_vars + self.param_vars

    def coefficient(self, j: int):
        if not 1 <= j <= self.mu:
            raise IndexError(f"coefficient index {j} outside 1..{self.mu}")
        return self.coefficients[j - 1]

    def polynomial(self) -> Polynomial:
        """P as one polynomial in (w..., params..., t)."""
        if not self.is_exact:
            raise ValueError("numeric characteristic polynomials have no closed form")
        ctx = self.coefficient_vars + (self.value_var,)
        t = Polynomial.variable(self.value_var, ctx)
        lead = Polynomial.constant(1, ctx) if self.leading is None else self.leading.in_context(ctx)
        P = lead * t**self.mu
        for j, a in enumerate(self.coefficients, start=1):
            P = P + a.in_context(ctx) * t ** (self.mu - j)
        return P

    def evaluate_coefficients(self, W) -> np.ndarray:
        """a_1..a_mu at each row of W (coordinates ordered as coefficient_vars)."""
        if not self.is_exact:
            raise ValueError("numeric coefficients are only known along sampled rays")
        W = np.atleast_2d(np.asarray(W, dtype=np.complex128))
        vals = eval_points(compile_map(list(self.coefficients), self.coefficient_vars), W)
        if self.leading is not None:
            lead = eval_points(compile_map([self.leading], self.coefficient_vars), W)
            vals = vals / lead
        return vals

    def __str__(self):
        if self.is_exact:
            return str(self.polynomial())
        return f"<numeric charpoly mu={self.mu} rays={len(self.coefficients[0].tables)}>"


# ---------------------------------------------------------------------------
# exact path


def map_multiplicity(g: Sequence[Polynomial], vars: Sequence[str], degree_cap=DEFAULT_DEGREE_CAP):
    """Local multiplicity at 0 of a map germ g: dim O_0/<g>."""
    return quotient_dimension(local_standard_basis(g, vars=vars, degree_cap=degree_cap))


def _mu_for(germ: Germ, g, degree_cap):
    if g is None:
        return milnor_number(germ, degree_cap), gradient(germ.f)
    g = [p.in_context(germ.vars) for p in g]
    if len(g) != germ.m:
        raise ValueError(f"map germ needs {germ.m} components, got {len(g)}")
    for p in g:
        if p.constant_term() != 0:
            raise ValueError("map germ must send 0 to 0")
    mu = map_multiplicity(g, germ.vars, degree_cap)
    if mu == INFINITE:
        raise NotIsolatedError("g^{-1}(0) is not isolated at the origin")
    return int(mu), g


def charpoly_exact(germ: Germ, g: Sequence[Polynomial] | None = None, *, degree_cap=DEFAULT_DEGREE_CAP) -> CharPoly:
    """Exact P via elimination.

    Refuses (GlobalLocalMismatch) when g has zeros away from the origin, since
    the eliminant then describes the global image rather than the germ.
    """
    mu, g = _mu_for(germ, g, degree_cap)
    glob = quotient_dimension(groebner(g, vars=germ.vars, degree_cap=degree_cap))
    if glob != mu:
        raise GlobalLocalMismatch(
            f"g has {glob} zeros with multiplicity globally but {mu} at the origin; "
            "use the numeric path"
        )
    w_vars = fresh_names("w", germ.vars, germ.m)
    (t,) = fresh_names("t", germ.vars + w_vars, 1)
    P = _eliminate_charpoly(germ.f, g, germ.vars, w_vars, (), t, mu, degree_cap)
    coeffs = P.coefficients_in(t)
    lead = coeffs.get(mu)
    if lead is None or not lead.is_constant():
        raise GlobalLocalMismatch("eliminant is not monic in t; image is not a finite covering")
    P = P / lead.constant_term()
    coeffs = P.coefficients_in(t)
    a = tuple(coeffs.get(mu - j, Polynomial.zero(w_vars)).in_context(w_vars) for j in range(1, mu + 1))
    cp = CharPoly(mu, "exact", w_vars, t, a, source=str(germ.f))
    verify_annihilation(cp, germ.f, g)
    return cp


def _eliminate_charpoly(f, g, x_vars, w_vars, p_vars, t, mu, degree_cap) -> Polynomial:
    ring = tuple(x_vars) + tuple(w_vars) + tuple(p_vars) + (t,)
    gens = [
        gi.in_context(ring) - Polynomial.variable(wi, ring) for gi, wi in zip(g, w_vars)
    ]
    gens.append(Polynomial.variable(t, ring) - f.in_context(ring))
    drop = tuple(v for v in x_vars if v not in p_vars)
    elim = eliminate(gens, drop, vars=ring, degree_cap=degree_cap)
    withs = [e for e in elim if e.degree_in(t) > 0]
    if not withs:
        raise GlobalLocalMismatch("elimination ideal has no generator involving t")
    E = min(withs, key=lambda e: (e.degree_in(t), len(e.terms)))
    if E.degree_in(t) != mu:
        raise GlobalLocalMismatch(
            f"eliminant has degree {E.degree_in(t)} in {t}, expected mu = {mu}"
        )
    return E


# ---------------------------------------------------------------------------
# numeric path


def _ray_table(sys, fmap, direction, radii, mu, cfg, ray) -> RayTable:
    fibres = track_ray(sys, direction, radii, mu, cfg, index=[1, ray])
    R = len(radii)
    values = np.full((R, mu), np.nan + 0j, dtype=np.complex128)
    usable = np.zeros(R, dtype=bool)
    scale = np.full(R, np.nan)
    for k, fib in enumerate(fibres):
        if not fib.complete:
            continue
        fv = eval_points(fmap, fib.points)[:, 0]
        values[k] = np.poly(fv)[1:]
        usable[k] = True
        scale[k] = float(np.abs(fv).max())
    return RayTable(ray, np.asarray(direction), np.asarray(radii, dtype=float), values, usable, scale, tuple(fibres))


def charpoly_numeric(
    germ: Germ,
    g: Sequence[Polynomial] | None = None,
    rays=None,
    radii: Sequence[float] | None = None,
    cfg: FibreConfig = FibreConfig(),
    *,
    jobs: int = 1,
    degree_cap=DEFAULT_DEGREE_CAP,
) -> CharPoly:
    """Sample a_j(s*w0) = (-1)^j e_j(f on the fibre) along rays."""
    mu, g = _mu_for(germ, g, degree_cap)
    m = germ.m
    rays = default_rays(m, cfg.seed) if rays is None else np.atleast_2d(np.asarray(rays, dtype=np.complex128))
    rays = rays / np.linalg.norm(rays, axis=1, keepdims=True)
    radii = default_radii() if radii is None else list(radii)
    sys = as_system(g, germ.vars)
    fmap = compile_map([germ.f], germ.vars)

    def work(r):
        return _ray_table(sys, fmap, rays[r], radii, mu, cfg, r)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            tables = tuple(ex.map(work, range(len(rays))))
    else:
        tables = tuple(work(r) for r in range(len(rays)))
    if all(t.usable.sum() < 4 for t in tables):
        raise TooFewSamples("fewer than 4 complete fibres on every ray")
    w_vars = fresh_names("w", germ.vars, m)
    (t,) = fresh_names("t", germ.vars + w_vars, 1)
    coeffs = tuple(SampledCoefficient(j, mu, tables) for j in range(1, mu + 1))
    warnings = tuple(
        f"ray {tab.ray}: {int((~tab.usable).sum())} incomplete fibre(s) excluded"
        for tab in tables
        if not tab.usable.all()
    )
    return CharPoly(mu, "numeric", w_vars, t, coeffs, source=str(germ.f), warnings=warnings)


def numeric_coefficients_at(germ: Germ, g, W, mu: int, cfg: FibreConfig = FibreConfig()) -> np.ndarray:
    """a_1..a_mu at arbitrary points W from freshly solved fibres (NaN rows
    where the fibre is incomplete)."""
    g = gradient(germ.f) if g is None else g
    sys = as_system(g, germ.vars)
    fmap = compile_map([germ.f], germ.vars)
    W = np.atleast_2d(np.asarray(W, dtype=np.complex128))
    out = np.full((len(W), mu), np.nan + 0j, dtype=np.complex128)
    for k, w in enumerate(W):
        fib = solve_fibre(sys, w, mu, cfg, index=[2, k])
        if fib.complete:
            out[k] = np.poly(eval_points(fmap, fib.points)[:, 0])[1:]
    return out


# ---------------------------------------------------------------------------
# orders


def _fit(logs, loga):
    A = np.vstack([logs, np.ones_like(logs)]).T
    coef, *_ = np.linalg.lstsq(A, loga, rcond=None)
    resid = loga - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid**2)))


def ord_of_coefficient(c) -> OrderEstimate:
    """Order of vanishing of a_j at 0.

    Exact coefficients: degree of the initial form.  Sampled coefficients:
    least-squares slope of log|a_j| against log s on each ray over the finest
    half of the usable radii (at least 4).  A ray whose consecutive local
    slopes spread by more than FIT_GUARD over that window is still in a
    pre-asymptotic regime (typically a near-cancellation between two powers
    of s) and is set aside.  The order is the minimum slope over the
    remaining rays, rounded only if within FIT_GUARD of an integer.
    """
    if isinstance(c, Polynomial):
        return OrderEstimate(0, ord_zero(c), "exact")
    if not isinstance(c, SampledCoefficient):
        raise TypeError(f"cannot take the order of {type(c).__name__}")
    j, mu = c.j, c.mu
    per_ray = []
    zero_rays = 0
    curved = 0
    for tab in c.tables:
        ok = tab.usable
        if ok.sum() == 0:
            continue
        vals = np.abs(tab.values[ok, j - 1])
        floor = ZERO_FLOOR * comb(mu, j) * tab.scale[ok] ** j
        nz = vals > floor
        if not nz.any():
            zero_rays += 1
            continue
        if nz.sum() < 4:
            continue
        s = tab.radii[ok][nz]
        a = vals[nz]
        order = np.argsort(-s)
        n = max(4, len(s) // 2)
        s, a = s[order][-n:], a[order][-n:]
        logs, loga = np.log(s), np.log(a)
        local = np.diff(loga) / np.diff(logs)
        if local.max() - local.min() > FIT_GUARD:
            curved += 1
            continue
        slope, resid = _fit(logs, loga)
        per_ray.append((tab.ray, slope, resid))
    if not per_ray:
        if zero_rays and not curved:
            return OrderEstimate(j, INFINITE, "fitted", per_ray=())
        raise FitUnstable(
            f"a_{j}: no ray with 4 usable samples in the asymptotic regime "
            f"({curved} curved, {zero_rays} at the zero floor)"
        )
    ray, slope, resid = min(per_ray, key=lambda r: r[1])
    value = int(round(slope))
    if abs(slope - value) >= FIT_GUARD or value < 0:
        raise FitUnstable(f"a_{j}: fitted slope {slope:.4f} is not within {FIT_GUARD} of an integer")
    return OrderEstimate(j, value, "fitted", slope, resid, tuple(per_ray))


# ---------------------------------------------------------------------------
# annihilation


@dataclass(frozen=True)
class AnnihilationReport:
    ok: bool
    method: str
    max_residual: float
    tolerance: float
    samples: int = 0
    offending: str = ""

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "method": self.method,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "offending": self.offending,
        }


def verify_annihilation(
    P: CharPoly,
    f: Polynomial,
    g: Sequence[Polynomial],
    samples=None,
    cfg: FibreConfig = FibreConfig(),
    *,
    raise_on_fail: bool = True,
) -> AnnihilationReport:
    """Check P(g(z), f(z)) = 0: as a polynomial identity when P is exact, else
    at sample points with tolerance 1e-8 * (1 + max|f|^mu)."""
    if P.is_exact:
        bind = {w: gi for w, gi in zip(P.w_vars, g)}
        bind[P.value_var] = f
        expr = P.polynomial()
        # parameters of a family charpoly are the same variables as in f
        expr = expr.in_context(P.w_vars + (P.value_var,) + P.param_vars)
        res = substitute(expr, bind)
        ok = res.is_zero()
        offending = "" if ok else str(Polynomial(dict(res.sorted_terms()[:1]), res.vars))
        rep = AnnihilationReport(ok, "exact", 0.0 if ok else float("inf"), 0.0, 0, offending)
    else:
        if samples is None:
            raise ValueError("numeric annihilation needs sample points")
        Z = np.atleast_2d(np.asarray(samples, dtype=np.complex128))
        vars = f.vars
        gmap = compile_map(list(g), vars)
        fmap = compile_map([f], vars)
        W = eval_points(gmap, Z)
        fz = eval_points(fmap, Z)[:, 0]
        germ = Germ(f)
        A = numeric_coefficients_at(germ, list(g), W, P.mu, cfg)
        good = ~np.isnan(A).any(axis=1)
        powers = np.vander(fz, P.mu + 1)  # fz^mu ... fz^0
        vals = powers[:, 0] + (A * powers[:, 1:]).sum(axis=1)
        resid = np.abs(vals[good])
        tol = 1e-8 * (1 + float(np.abs(fz[good]).max() ** P.mu)) if good.any() else 0.0
        mx = float(resid.max()) if good.any() else float("nan")
        ok = bool(good.any()) and mx <= tol
        rep = AnnihilationReport(ok, "numeric", mx, tol, int(good.sum()))
    if raise_on_fail and not rep.ok:
        raise IdentityFailed(
            f"P(g, f) does not vanish ({rep.method}): {rep.offending or rep.max_residual}",
            rep.offending or rep.max_residual,
        )
    return rep


def write_samples_csv(path, P: CharPoly):
    """CSV rows: ray id, radius, j, Re a_j, Im a_j."""
    if P.is_exact:
        raise ValueError("exact characteristic polynomials have no sample tables")
    tables = P.coefficients[0].tables
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["ray", "radius", "j", "re", "im"])
        for tab in tables:
            for k, s in enumerate(tab.radii):
                if not tab.usable[k]:
                    continue
                for j in range(1, P.mu + 1):
                    v = tab.values[k, j - 1]
                    wr.writerow([tab.ray, repr(float(s)), j, repr(float(v.real)), repr(float(v.imag))])
