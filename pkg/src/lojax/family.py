"""Unfoldings f(x, t) of a germ f_0 = f(., 0).

The map G(x, t) = (grad_x f, t) is a finite covering whose multiplicity is
mu_0.  When mu is constant along t, the characteristic polynomial of f with
respect to G gives a uniform gradient inequality for every f_t with exponent
mu_0 / (mu_0 + 1).  This module provides the pieces to test all of that on
concrete families: mu tables on exact parameter grids, a symbolic
mu-constancy certificate, the family characteristic polynomial, the
coefficient bound |a_j(y, t)| <= C ||y||^(j+1), and the empirical checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Polynomial, gradient, substitute
from .basis import DEFAULT_DEGREE_CAP, groebner, local_standard_basis, normal_form, quotient_dimension
from .charpoly import (
    CharPoly,
    _eliminate_charpoly,
    charpoly_exact,
    charpoly_numeric,
    fresh_names,
    verify_annihilation,
)
from .errors import (
    GlobalLocalMismatch,
    MismatchError,
    NotIsolatedError,
    PreconditionError,
    SemicontinuityViolation,
)
from .exponent import (
    BOUNDED,
    DIVERGENT,
    ShellConfig,
    empirical_verify,
    shell_verdict,
    theorem_exponent,
)
from .field import GaussianRational, as_scalar, scalar_str, to_complex
from .fibres import FibreConfig, _rng, as_system, random_polydisc, random_sphere, track_ray
from .milnor import Germ, milnor_number
from .parsing import parse_poly

__all__ = [
    "Unfolding",
    "build_G",
    "mu_of_G",
    "default_grid",
    "GridReport",
    "mu_constancy_grid",
    "SymbolicReport",
    "mu_constancy_symbolic",
    "family_charpoly",
    "specialize",
    "SpecializationReport",
    "specialization_check",
    "HartogsReport",
    "hartogs_bound_check",
    "UniformReport",
    "uniform_exponent_verify",
    "SemicontinuityReport",
    "semicontinuity_check",
    "StollReport",
    "stoll_check",
    "FamilyReport",
    "analyze_family",
    "CONSTANT_ON_GRID",
    "NON_CONSTANT",
    "ERROR",
    "PROVED",
    "REFUTED",
    "UNDECIDED",
]

CONSTANT_ON_GRID = "CONSTANT_ON_GRID"
NON_CONSTANT = "NON_CONSTANT"
ERROR = "ERROR"
PROVED = "PROVED"
REFUTED = "REFUTED"
UNDECIDED = "UNDECIDED"


def _point_str(t0) -> str:
    return "(" + ", ".join(scalar_str(c) for c in t0) + ")"


@dataclass(frozen=True)
class Unfolding:
    """f(x, t) with f(0, t) identically zero."""

    f: Polynomial
    x_vars: tuple
    t_vars: tuple

    def __post_init__(self):
        x_vars, t_vars = tuple(self.x_vars), tuple(self.t_vars)
        if not x_vars:
            raise PreconditionError("an unfolding needs at least one x variable")
        if set(x_vars) & set(t_vars):
            raise ValueError("x and t variables must be distinct")
        object.__setattr__(self, "x_vars", x_vars)
        object.__setattr__(self, "t_vars", t_vars)
        object.__setattr__(self, "f", self.f.in_context(x_vars + t_vars))
        at_zero = substitute(self.f, {x: 0 for x in x_vars})
        if not at_zero.is_zero():
            raise PreconditionError(
                f"f(0, t) must vanish identically, but f(0, t) = {at_zero}"
            )

    @classmethod
    def parse(cls, text: str, x_vars: Sequence[str], t_vars: Sequence[str]) -> "Unfolding":
        vars = tuple(x_vars) + tuple(t_vars)
        return cls(parse_poly(text, vars), tuple(x_vars), tuple(t_vars))

    @property
    def vars(self) -> tuple:
        return self.x_vars + self.t_vars

    @property
    def m(self) -> int:
        return len(self.x_vars)

    @property
    def k(self) -> int:
        return len(self.t_vars)

    def g(self) -> list:
        """grad_x f in the full (x, t) context."""
        return gradient(self.f, self.x_vars)

    def slice(self, t0: Sequence = ()) -> Germ:
        """The germ f_{t0} = f(., t0) in the x variables."""
        t0 = tuple(t0)
        if len(t0) != self.k:
            raise ValueError(f"parameter point needs {self.k} coordinates, got {len(t0)}")
        if not self.k:
            return Germ(self.f.in_context(self.x_vars))
        p = substitute(self.f, dict(zip(self.t_vars, t0)))
        return Germ(p.in_context(self.x_vars))

    @property
    def f0(self) -> Germ:
        return self.slice((0,) * self.k)

    @property
    def mu0(self) -> int:
        return milnor_number(self.f0)


def build_G(u: Unfolding) -> list:
    """G(x, t) = (df/dx_1, ..., df/dx_m, t_1, ..., t_k)."""
    return u.g() + [Polynomial.variable(t, u.vars) for t in u.t_vars]


def mu_of_G(u: Unfolding, degree_cap=DEFAULT_DEGREE_CAP) -> int:
    """Local multiplicity of G at 0; equals mu_0 for an isolated f_0."""
    mu0 = u.mu0
    dim = quotient_dimension(local_standard_basis(build_G(u), vars=u.vars, degree_cap=degree_cap))
    if dim != mu0:
        raise MismatchError(f"multiplicity of G is {dim}, expected mu_0 = {mu0}")
    return int(dim)


# ---------------------------------------------------------------------------
# mu-constancy


_GRID_VALUES = (
    Fraction(0),
    Fraction(1, 8),
    Fraction(-1, 8),
    Fraction(1, 4),
    Fraction(-1, 4),
    GaussianRational(0, Fraction(1, 8)),
)


def default_grid(k: int, limit: int = 25) -> list:
    """k-fold product of {0, 1/8, -1/8, 1/4, -1/4, i/8}, smallest norms first,
    pruned to ``limit`` points."""
    pts = list(itertools.product(_GRID_VALUES, repeat=k))
    pts.sort(key=lambda p: sum(abs(to_complex(c)) ** 2 for c in p))
    return [tuple(p) for p in pts[:limit]]


def _grid(u: Unfolding, grid) -> list:
    if grid is None:
        return default_grid(u.k)
    out = []
    for p in grid:
        p = tuple(as_scalar(c) for c in p)
        if len(p) != u.k:
            raise ValueError(f"grid point {p} needs {u.k} coordinates")
        out.append(p)
    return out


@dataclass(frozen=True)
class GridReport:
    grid: tuple
    mu0: int
    mu: tuple
    verdict: str

    def to_dict(self) -> dict:
        return {
            "mu0": self.mu0,
            "verdict": self.verdict,
            "table": [
                {"t": [scalar_str(c) for c in p], "mu": m} for p, m in zip(self.grid, self.mu)
            ],
        }


def mu_constancy_grid(u: Unfolding, grid=None, degree_cap=DEFAULT_DEGREE_CAP) -> GridReport:
    """mu(f_t) at every grid point; NOT_ISOLATED entries make the verdict ERROR."""
    pts = _grid(u, grid)
    mu0 = u.mu0
    table = []
    for p in pts:
        try:
            table.append(milnor_number(u.slice(p), degree_cap))
        except (NotIsolatedError, PreconditionError) as exc:
            table.append(exc.code)
    if any(isinstance(m, str) for m in table):
        verdict = ERROR
    elif all(m == mu0 for m in table):
        verdict = CONSTANT_ON_GRID
    else:
        verdict = NON_CONSTANT
    return GridReport(tuple(pts), mu0, tuple(table), verdict)


@dataclass(frozen=True)
class SymbolicReport:
    verdict: str
    powers: dict
    cap: int
    reason: str = ""

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "powers": dict(self.powers), "cap": self.cap, "reason": self.reason}


def mu_constancy_symbolic(u: Unfolding, N: int | None = None, degree_cap=DEFAULT_DEGREE_CAP) -> SymbolicReport:
    """Certify that the x-critical germ of f is {x = 0}.

    REFUTED if some df/dx_j does not vanish on {x = 0}.  PROVED if every x_i
    has a power x_i^n, n <= N, in the local ideal <grad_x f> of O_{m+k}, so
    the critical germ is contained in {x = 0}.  UNDECIDED otherwise.
    """
    mu0 = u.mu0
    cap = mu0 + 2 if N is None else int(N)
    g = u.g()
    zero_x = {x: 0 for x in u.x_vars}
    for x, gi in zip(u.x_vars, g):
        rest = substitute(gi, zero_x)
        if not rest.is_zero():
            return SymbolicReport(REFUTED, {}, cap, f"df/d{x} at x = 0 is {rest}")
    basis = local_standard_basis(g, vars=u.vars, degree_cap=degree_cap)
    powers = {}
    for x in u.x_vars:
        xv = Polynomial.variable(x, u.vars)
        for n in range(1, cap + 1):
            if normal_form(xv**n, basis).is_zero():
                powers[x] = n
                break
        else:
            return SymbolicReport(UNDECIDED, powers, cap, f"no power of {x} up to {cap} lies in the ideal")
    return SymbolicReport(PROVED, powers, cap)


# ---------------------------------------------------------------------------
# family characteristic polynomial


def family_charpoly(
    u: Unfolding,
    method: str = "exact",
    *,
    rays=None,
    radii=None,
    cfg: FibreConfig = FibreConfig(),
    degree_cap=DEFAULT_DEGREE_CAP,
    check_constancy: bool = True,
) -> CharPoly:
    """P(y, t, s) with P(grad_x f(x, t), t, f(x, t)) = 0.

    Requires mu-constancy (symbolic certificate, else the default grid);
    a_j(0, t) = 0 is then checked exactly and a failure is a MismatchError.

    The exact eliminant may have a leading s-coefficient that depends on t
    but is a unit at 0; it is kept in ``CharPoly.leading`` normalised to
    leading(0) = 1.
    """
    mu0 = u.mu0
    if check_constancy and u.k:
        if mu_constancy_symbolic(u, degree_cap=degree_cap).verdict != PROVED:
            if mu_constancy_grid(u, degree_cap=degree_cap).verdict != CONSTANT_ON_GRID:
                raise PreconditionError("mu-constancy is neither proved nor observed on the default grid")
    y_vars = fresh_names("y", u.vars, u.m)
    (s,) = fresh_names("s", u.vars + y_vars, 1)
    G = build_G(u)
    if method == "numeric":
        P = charpoly_numeric(Germ(u.f), G, rays=rays, radii=radii, cfg=cfg, degree_cap=degree_cap)
        return replace(P, w_vars=y_vars, param_vars=u.t_vars, value_var=s)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    glob = quotient_dimension(groebner(G, vars=u.vars, degree_cap=degree_cap))
    if glob != mu0:
        raise GlobalLocalMismatch(f"G has {glob} zeros globally but multiplicity {mu0} at the origin")
    E = _eliminate_charpoly(u.f, u.g(), u.x_vars, y_vars, u.t_vars, s, mu0, degree_cap)
    ctx = y_vars + u.t_vars
    coeffs = {k: c.in_context(ctx) for k, c in E.coefficients_in(s).items()}
    lead = coeffs[mu0]
    if lead.used_vars() and not set(lead.used_vars()) <= set(u.t_vars):
        raise GlobalLocalMismatch(f"leading coefficient {lead} depends on y")
    c0 = lead.constant_term()
    if c0 == 0:
        raise GlobalLocalMismatch(f"leading coefficient {lead} vanishes at t = 0")
    lead = lead / c0
    a = tuple((coeffs.get(mu0 - j, Polynomial.zero(ctx)) / c0) for j in range(1, mu0 + 1))
    P = CharPoly(
        mu0,
        "exact",
        y_vars,
        s,
        a,
        param_vars=u.t_vars,
        leading=None if lead.is_constant() else lead,
        source=str(u.f),
    )
    verify_annihilation(P, u.f, u.g())
    for j, c in enumerate(a, start=1):
        rest = substitute(c, {y: 0 for y in y_vars})
        if not rest.is_zero():
            raise MismatchError(f"a_{j}(0, t) = {rest} does not vanish")
    return P


def specialize(P: CharPoly, t0: Sequence) -> CharPoly:
    """Substitute the parameters of an exact family P; the result is monic."""
    if not P.is_exact:
        raise ValueError("only exact characteristic polynomials can be specialized")
    bind = dict(zip(P.param_vars, t0))
    lead = 1
    if P.leading is not None:
        lead = substitute(P.leading, bind).constant_term()
        if lead == 0:
            raise PreconditionError(f"leading coefficient vanishes at t = {_point_str(t0)}")
    coeffs = tuple((substitute(c, bind) / lead).in_context(P.w_vars) for c in P.coefficients)
    return CharPoly(P.mu, "exact", P.w_vars, P.value_var, coeffs, source=P.source)


@dataclass(frozen=True)
class SpecializationReport:
    t: tuple
    ok: bool
    method: str

    def to_dict(self) -> dict:
        return {"t": [scalar_str(c) for c in self.t], "ok": self.ok, "method": self.method}


def specialization_check(u: Unfolding, P: CharPoly, t0: Sequence, degree_cap=DEFAULT_DEGREE_CAP) -> SpecializationReport:
    """P(y, t0, s) against the characteristic polynomial of f_{t0} with
    respect to g_{t0}, computed independently.

    When mu(f_{t0}) < mu_0 the slice covering g_{t0} still has mu_0 sheets
    but only some of them pass through 0, so the slice is eliminated as a
    covering of degree mu_0 instead of through the local gate.
    """
    t0 = tuple(as_scalar(c) for c in t0)
    spec = specialize(P, t0)
    germ = u.slice(t0)
    g_t = [substitute(gi, dict(zip(u.t_vars, t0))).in_context(u.x_vars) for gi in u.g()] if u.k else [
        gi.in_context(u.x_vars) for gi in u.g()
    ]
    try:
        direct = charpoly_exact(germ, g_t, degree_cap=degree_cap)
        method = "local"
    except (GlobalLocalMismatch, NotIsolatedError):
        w_vars = fresh_names("w", u.x_vars, u.m)
        (tv,) = fresh_names("t", u.x_vars + w_vars, 1)
        E = _eliminate_charpoly(germ.f, g_t, u.x_vars, w_vars, (), tv, P.mu, degree_cap)
        coeffs = E.coefficients_in(tv)
        lc = coeffs[P.mu]
        if not lc.is_constant():
            return SpecializationReport(t0, False, "covering")
        a = tuple(
            (coeffs.get(P.mu - j, Polynomial.zero(w_vars)) / lc.constant_term()).in_context(w_vars)
            for j in range(1, P.mu + 1)
        )
        direct = CharPoly(P.mu, "exact", w_vars, tv, a)
        method = "covering"
    if direct.mu != spec.mu:
        return SpecializationReport(t0, False, method)
    # compare coefficientwise after renaming the w variables
    ok = True
    for a, b in zip(spec.coefficients, direct.coefficients):
        ren = substitute(b, {w: Polynomial.variable(y, spec.w_vars) for w, y in zip(direct.w_vars, spec.w_vars)}) if b.used_vars() else b
        if not (a - ren.in_context(spec.w_vars)).is_zero():
            ok = False
    return SpecializationReport(t0, ok, method)


# ---------------------------------------------------------------------------
# coefficient bounds


@dataclass(frozen=True)
class HartogsReport:
    shift: int
    radii: tuple
    table: tuple  # (j, sup, per-shell sups, verdict)
    ok: bool

    def to_dict(self) -> dict:
        return {
            "shift": self.shift,
            "ok": self.ok,
            "radii": list(self.radii),
            "table": [
                {"j": j, "sup": s, "shell_sups": list(sh), "verdict": v} for j, s, sh, v in self.table
            ],
        }


def hartogs_bound_check(
    P: CharPoly,
    *,
    shift: int = 1,
    radii: Sequence[float] = tuple(0.1 * 0.5**k for k in range(8)),
    points: int = 200,
    t_radius: float = 0.25,
    seed: int = 0,
) -> HartogsReport:
    """Sup of |a_j(y, t)| / ||y||^(j + shift) over y on shrinking spheres and t
    in a polydisc.  ``shift = 1`` is the claimed bound; ``shift = 2`` is a
    negative control that must show growth."""
    if not P.is_exact:
        raise ValueError("the coefficient bound check needs an exact P")
    m, k = len(P.w_vars), len(P.param_vars)
    radii = tuple(float(r) for r in radii)
    rng = _rng(seed, [0x4A27])
    U = random_sphere(rng, points, m)
    T = random_polydisc(rng, points, k, t_radius) if k else np.zeros((points, 0), dtype=np.complex128)
    sups = np.zeros((len(radii), P.mu))
    for i, r in enumerate(radii):
        A = np.abs(P.evaluate_coefficients(np.hstack([r * U, T])))
        sups[i] = (A / r ** (np.arange(1, P.mu + 1) + shift)).max(axis=0)
    table = []
    for j, c in enumerate(P.coefficients, start=1):
        if c.is_zero():
            continue
        col = tuple(float(v) for v in sups[:, j - 1])
        table.append((j, max(col), col, shell_verdict(col)))
    ok = all(v != DIVERGENT for *_, v in table)
    return HartogsReport(shift, radii, tuple(table), ok)


# ---------------------------------------------------------------------------
# exponents along the family


@dataclass(frozen=True)
class UniformReport:
    theta: Fraction
    grid: tuple
    verdicts: tuple
    constants: tuple
    shared_constant: float
    joint_verdict: str
    joint_constant: float
    ok: bool
    warnings: tuple = ()

    def to_dict(self) -> dict:
        return {
            "theta": str(self.theta),
            "ok": self.ok,
            "shared_constant": self.shared_constant,
            "joint_verdict": self.joint_verdict,
            "joint_constant": self.joint_constant,
            "table": [
                {"t": [scalar_str(c) for c in p], "verdict": v, "constant": c}
                for p, v, c in zip(self.grid, self.verdicts, self.constants)
            ],
            "warnings": list(self.warnings),
        }


def uniform_exponent_verify(
    u: Unfolding,
    grid=None,
    shells: ShellConfig = ShellConfig(),
    *,
    constancy: GridReport | None = None,
    jobs: int = 1,
) -> UniformReport:
    """|f_t|^theta <= C ||grad f_t|| with theta = mu_0/(mu_0+1) and one C for
    the whole grid, plus the joint inequality in all variables (x, t)."""
    pts = _grid(u, grid)
    constancy = constancy or mu_constancy_grid(u, pts)
    if constancy.verdict != CONSTANT_ON_GRID:
        raise PreconditionError(
            f"mu is not constant on the grid ({constancy.verdict}); use the semicontinuity check"
        )
    theta = theorem_exponent(constancy.mu0)
    verdicts, consts, warnings = [], [], []
    for p in pts:
        rep = empirical_verify(u.slice(p), theta, shells, jobs=jobs)
        verdicts.append(rep.verdict)
        consts.append(rep.constant)
        warnings.extend(f"t = {_point_str(p)}: {w}" for w in rep.warnings)
    joint = empirical_verify(Germ(u.f), theta, shells, jobs=jobs)
    warnings.extend(f"joint: {w}" for w in joint.warnings)
    shared = max(consts)
    ok = all(v == BOUNDED for v in verdicts) and joint.verdict == BOUNDED
    return UniformReport(
        theta, tuple(pts), tuple(verdicts), tuple(consts), shared, joint.verdict, joint.constant, ok, tuple(warnings)
    )


@dataclass(frozen=True)
class SemicontinuityReport:
    grid: tuple
    mu0: int
    mu: tuple
    theta: Fraction
    verdicts: tuple
    constants: tuple
    ok: bool

    def to_dict(self) -> dict:
        return {
            "mu0": self.mu0,
            "ok": self.ok,
            "theta": str(self.theta),
            "table": [
                {"t": [scalar_str(c) for c in p], "mu": m, "verdict": v, "constant": c}
                for p, m, v, c in zip(self.grid, self.mu, self.verdicts, self.constants)
            ],
        }


def semicontinuity_check(
    u: Unfolding,
    grid=None,
    shells: ShellConfig = ShellConfig(),
    *,
    constancy: GridReport | None = None,
    jobs: int = 1,
) -> SemicontinuityReport:
    """mu_t <= mu_0 on the grid, and the exponent mu_0/(mu_0+1) per slice with
    its own constant.  A violation raises SemicontinuityViolation."""
    pts = _grid(u, grid)
    constancy = constancy or mu_constancy_grid(u, pts)
    mu0 = constancy.mu0
    bad = [(p, m) for p, m in zip(pts, constancy.mu) if not isinstance(m, str) and m > mu0]
    if bad:
        p, m = bad[0]
        raise SemicontinuityViolation(f"mu = {m} at t = {_point_str(p)} exceeds mu_0 = {mu0}")
    theta = theorem_exponent(mu0)
    verdicts, consts = [], []
    for p, m in zip(pts, constancy.mu):
        if isinstance(m, str):
            verdicts.append(m)
            consts.append(float("nan"))
            continue
        rep = empirical_verify(u.slice(p), theta, shells, jobs=jobs)
        verdicts.append(rep.verdict)
        consts.append(rep.constant)
    ok = all(v == BOUNDED for v in verdicts)
    return SemicontinuityReport(tuple(pts), mu0, tuple(constancy.mu), theta, tuple(verdicts), tuple(consts), ok)


# ---------------------------------------------------------------------------
# sheet counts


@dataclass(frozen=True)
class StollReport:
    t: tuple
    mu0: int
    mu_t: int
    samples: int
    full_fibres: int
    converging_ok: int
    fraction: float
    ok: bool

    def to_dict(self) -> dict:
        return {
            "t": [scalar_str(c) for c in self.t],
            "mu0": self.mu0,
            "mu_t": self.mu_t,
            "samples": self.samples,
            "full_fibres": self.full_fibres,
            "converging_ok": self.converging_ok,
            "fraction": self.fraction,
            "ok": self.ok,
        }


def stoll_check(
    u: Unfolding,
    t0: Sequence,
    *,
    samples: int = 50,
    start: float = 1e-3,
    stop: float = 1e-9,
    ratio: float = 0.25,
    cfg: FibreConfig = FibreConfig(),
    required: float = 0.95,
) -> StollReport:
    """Sheet count of g_{t0} against mu_0 and convergence of mu_t sheets to 0.

    For each random direction w0, the fibre over start*w0 must have mu_0
    points in the polydisc; following them by continuation down to stop*w0,
    exactly mu(f_{t0}) of them must shrink to at most half their initial
    norm while the rest stay put.
    """
    t0 = tuple(as_scalar(c) for c in t0)
    mu0 = u.mu0
    germ = u.slice(t0)
    mu_t = milnor_number(germ)
    g_t = [substitute(gi, dict(zip(u.t_vars, t0))) if u.k else gi for gi in u.g()]
    sys = as_system([p.in_context(u.x_vars) for p in g_t], u.x_vars)
    radii = []
    s = start
    while s >= stop * (1 - 1e-12):
        radii.append(s)
        s *= ratio
    rng = _rng(cfg.seed, [0x5707])
    W0 = random_sphere(rng, samples, u.m)
    full = good = 0
    for i, w0 in enumerate(W0):
        fibres = track_ray(sys, w0, radii, mu0, cfg, index=[0x5707, i])
        first, last = fibres[0], fibres[-1]
        if not first.complete:
            continue
        full += 1
        if any(f.status != "continued" for f in fibres[1:]) or not last.complete:
            continue
        n0 = np.linalg.norm(first.points, axis=1)
        n1 = np.linalg.norm(last.points, axis=1)
        if int((n1 <= 0.5 * n0).sum()) == mu_t:
            good += 1
    frac = good / samples
    return StollReport(t0, mu0, mu_t, samples, full, good, frac, frac >= required and full >= required * samples)


# ---------------------------------------------------------------------------
# assembled report


@dataclass
class FamilyReport:
    f: str
    x_vars: tuple
    t_vars: tuple
    mu0: int
    mu_G: int
    constancy: GridReport
    symbolic: SymbolicReport
    uniform_theta: Fraction
    uniform: UniformReport | None = None
    semicontinuity: SemicontinuityReport | None = None
    hartogs: HartogsReport | None = None
    charpoly: str = ""
    charpoly_method: str = ""
    specialization: tuple = ()
    stoll: tuple = ()
    warnings: list = field(default_factory=list)

    @property
    def hard_failure(self) -> bool:
        if self.uniform is not None and any(v == DIVERGENT for v in self.uniform.verdicts):
            return True
        if self.uniform is not None and self.uniform.joint_verdict == DIVERGENT:
            return True
        if any(not s.ok for s in self.specialization):
            return True
        if self.hartogs is not None and not self.hartogs.ok:
            return True
        if self.semicontinuity is not None and DIVERGENT in self.semicontinuity.verdicts:
            return True
        return any(not s.ok for s in self.stoll)

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "x_vars": list(self.x_vars),
            "t_vars": list(self.t_vars),
            "mu0": self.mu0,
            "mu_G": self.mu_G,
            "constancy": self.constancy.to_dict(),
            "symbolic": self.symbolic.to_dict(),
            "uniform_theta": str(self.uniform_theta),
            "uniform": self.uniform.to_dict() if self.uniform else None,
            "semicontinuity": self.semicontinuity.to_dict() if self.semicontinuity else None,
            "charpoly": {"method": self.charpoly_method, "P": self.charpoly} if self.charpoly_method else None,
            "hartogs": self.hartogs.to_dict() if self.hartogs else None,
            "specialization": [s.to_dict() for s in self.specialization],
            "stoll": [s.to_dict() for s in self.stoll],
            "hard_failure": self.hard_failure,
            "warnings": list(self.warnings),
        }


def analyze_family(
    u: Unfolding,
    grid=None,
    *,
    shells: ShellConfig = ShellConfig(),
    cfg: FibreConfig = FibreConfig(),
    stoll_samples: int = 50,
    exact_charpoly: bool = True,
    jobs: int = 1,
    degree_cap=DEFAULT_DEGREE_CAP,
) -> FamilyReport:
    """Every family check in one pass.

    mu-constant families get the uniform exponent, the family
    characteristic polynomial and its coefficient bounds; others get the
    semicontinuity table and sheet counts on the slices where mu drops.
    """
    pts = _grid(u, grid)
    mu0 = u.mu0
    muG = mu_of_G(u, degree_cap)
    constancy = mu_constancy_grid(u, pts, degree_cap)
    symbolic = mu_constancy_symbolic(u, degree_cap=degree_cap)
    rep = FamilyReport(str(u.f), u.x_vars, u.t_vars, mu0, muG, constancy, symbolic, theorem_exponent(mu0))
    if symbolic.verdict == PROVED and constancy.verdict == NON_CONSTANT:
        rep.warnings.append("symbolic certificate and grid disagree")
    rep.semicontinuity = semicontinuity_check(u, pts, shells, constancy=constancy, jobs=jobs)
    if constancy.verdict == CONSTANT_ON_GRID:
        rep.uniform = uniform_exponent_verify(u, pts, shells, constancy=constancy, jobs=jobs)
        if exact_charpoly:
            try:
                P = family_charpoly(u, "exact", degree_cap=degree_cap)
            except GlobalLocalMismatch as exc:
                rep.warnings.append(f"family charpoly: {exc}")
            else:
                rep.charpoly = str(P.polynomial())
                rep.charpoly_method = "exact"
                rep.hartogs = hartogs_bound_check(P, seed=cfg.seed)
                rep.specialization = tuple(specialization_check(u, P, p, degree_cap) for p in pts)
    else:
        rep.stoll = tuple(
            stoll_check(u, p, samples=stoll_samples, cfg=cfg)
            for p, m in zip(pts, constancy.mu)
            if not isinstance(m, str) and m < mu0
        )
    return rep
