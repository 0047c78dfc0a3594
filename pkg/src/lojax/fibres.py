"""Numerical fibres g^{-1}(w) inside a polydisc.

A fibre is found by multistart damped Newton from uniformly random points of
the polydisc, followed by deduplication.  Since the expected sheet count is
known in advance (it is computed exactly elsewhere), completeness of each
fibre can be checked and is reported rather than hidden.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .numeric import NewtonSystem, compile_system, eval_points

__all__ = [
    "FibreConfig",
    "Fibre",
    "as_system",
    "newton_refine",
    "solve_fibre",
    "track_ray",
    "write_fibres_csv",
    "random_polydisc",
    "random_sphere",
]


@dataclass(frozen=True)
class FibreConfig:
    rho: float = 0.5
    tol: float = 1e-12
    dedupe: float = 1e-8
    max_starts: int | None = None
    seed: int = 0
    maxit: int = 50
    max_halvings: int = 4

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("polydisc radius must be positive")
        if not self.dedupe > self.tol:
            raise ValueError("dedupe radius must exceed the Newton tolerance")

    def starts(self, mu: int) -> int:
        return self.max_starts if self.max_starts is not None else 200 * max(mu, 1)

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "tol": self.tol,
            "dedupe": self.dedupe,
            "max_starts": self.max_starts,
            "seed": self.seed,
            "maxit": self.maxit,
            "max_halvings": self.max_halvings,
        }


@dataclass
class Fibre:
    w: np.ndarray
    points: np.ndarray
    residuals: np.ndarray
    mu_target: int
    rho: float
    complete: bool
    near_critical: bool = False
    status: str = "multistart"
    flags: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    @property
    def residual(self) -> float:
        return float(self.residuals.max()) if len(self.residuals) else 0.0


def as_system(g, vars: Sequence[str] | None = None) -> NewtonSystem:
    if isinstance(g, NewtonSystem):
        return g
    polys = list(g)
    if vars is None:
        vars = polys[0].vars
    return compile_system(polys, vars)


def _rng(seed: int, index) -> np.random.Generator:
    if isinstance(index, Iterable):
        idx = [int(i) for i in index]
    else:
        idx = [int(index)]
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1)] + idx))


def random_polydisc(rng: np.random.Generator, n: int, m: int, rho: float) -> np.ndarray:
    """Uniform samples from the polydisc {|z_k| <= rho}."""
    r = rho * np.sqrt(rng.random((n, m)))
    phi = 2 * np.pi * rng.random((n, m))
    return r * np.exp(1j * phi)


def random_sphere(rng: np.random.Generator, n: int, m: int, radius: float = 1.0) -> np.ndarray:
    """Uniform samples from the sphere ||z|| = radius in C^m."""
    Z = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    return radius * Z


def newton_refine(g, w, z0, cfg: FibreConfig = FibreConfig()):
    """Refine ``z0`` to a solution of g(z) = w; returns None on failure."""
    sys = as_system(g)
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    Z, ok, _ = sys.newton(w, np.atleast_2d(np.asarray(z0, dtype=np.complex128)), cfg.tol, cfg.maxit)
    if not ok[0]:
        return None
    return Z[0]


def _uncertainty(sys: NewtonSystem, Z: np.ndarray, tol: float) -> np.ndarray:
    """First-order position uncertainty tol / sigma_min(J) at each point."""
    if len(Z) == 0:
        return np.zeros(0)
    m = sys.m
    J = eval_points(sys.jac, Z).reshape(-1, m, m)
    smin = np.linalg.svd(J, compute_uv=False)[:, -1]
    with np.errstate(divide="ignore"):
        return np.where(smin > 0, tol / smin, np.inf)


def _dedupe(sys, Z, resid, keep_mask, cfg):
    """Distinct points in start order.  Two points are merged when closer than
    the dedupe radius or than their combined position uncertainty."""
    idx = np.flatnonzero(keep_mask)
    unc = _uncertainty(sys, Z[idx], cfg.tol)
    points, res, radii = [], [], []
    for k, u in zip(idx, unc):
        z = Z[k]
        r = max(cfg.dedupe, 4 * u)
        if all(np.linalg.norm(z - p) > max(r, q) for p, q in zip(points, radii)):
            points.append(z)
            res.append(resid[k])
            radii.append(r)
    m = Z.shape[1]
    pts = np.array(points, dtype=np.complex128).reshape(-1, m)
    fuzzy = any(r > cfg.dedupe for r in radii)
    return pts, np.array(res, dtype=float), fuzzy


def _near_critical(points, delta) -> bool:
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if np.linalg.norm(points[a] - points[b]) <= 10 * delta:
                return True
    return False


def _finish(w, pts, res, mu_target, rho, cfg, status, flags, fuzzy=False) -> Fibre:
    near = fuzzy or _near_critical(pts, cfg.dedupe)
    complete = len(pts) == mu_target and not near
    if near:
        flags = flags + ["near_critical"]
    return Fibre(w, pts, res, mu_target, rho, complete, near, status, flags)


def solve_fibre(g, w, mu_target: int, cfg: FibreConfig = FibreConfig(), index=0) -> Fibre:
    """All solutions of g(z) = w in the polydisc of radius ``cfg.rho``.

    If more than ``mu_target`` distinct points are found, far roots are
    assumed to have entered the polydisc and the radius is halved, at most
    ``cfg.max_halvings`` times.
    """
    if mu_target < 1:
        raise ValueError("mu_target must be at least 1")
    sys = as_system(g)
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    m = sys.m
    rho = cfg.rho
    flags: list = []
    for attempt in range(cfg.max_halvings + 1):
        rng = _rng(cfg.seed, list(np.atleast_1d(index)) + [attempt])
        Z0 = random_polydisc(rng, cfg.starts(mu_target), m, rho)
        Z, ok, resid = sys.newton(w, Z0, cfg.tol, cfg.maxit)
        inside = ok & (np.abs(Z) <= rho).all(axis=1) & (resid <= cfg.tol)
        pts, res, fuzzy = _dedupe(sys, Z, resid, inside, cfg)
        if len(pts) > mu_target and attempt < cfg.max_halvings:
            flags.append(f"halved_rho:{rho:g}")
            rho /= 2
            continue
        break
    if len(pts) > mu_target:
        flags.append("excess_points")
    return _finish(w, pts, res, mu_target, rho, cfg, "multistart", flags, fuzzy)


def track_ray(g, w0, radii: Sequence[float], mu_target: int, cfg: FibreConfig = FibreConfig(), index=0) -> list:
    """Fibres over s*w0 for decreasing radii s, by Newton continuation.

    The first fibre comes from multistart; later ones start from the previous
    fibre's points.  If continuation loses a path the fibre is recomputed by
    multistart and ``path_lost`` is recorded in its flags.
    """
    sys = as_system(g)
    w0 = np.atleast_1d(np.asarray(w0, dtype=np.complex128))
    radii = [float(s) for s in radii]
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    base = list(np.atleast_1d(index))
    out: list[Fibre] = []
    prev: Fibre | None = None
    for k, s in enumerate(radii):
        w = s * w0
        fib = None
        if prev is not None and prev.complete:
            Z, ok, resid = sys.newton(w, prev.points, cfg.tol, cfg.maxit)
            inside = ok & (np.abs(Z) <= prev.rho).all(axis=1) & (resid <= cfg.tol)
            pts, res, fuzzy = _dedupe(sys, Z, resid, inside, cfg)
            cand = _finish(w, pts, res, mu_target, prev.rho, cfg, "continued", [], fuzzy)
            if cand.complete:
                fib = cand
        if fib is None:
            fib = solve_fibre(sys, w, mu_target, cfg, index=base + [k])
            if prev is not None and prev.complete:
                fib.flags.append("path_lost")
                fib.status = "refreshed"
        out.append(fib)
        prev = fib
    return out


def write_fibres_csv(path, fibres: Sequence[Fibre], radii: Sequence[float] | None = None):
    """CSV rows: radius, point index, Re/Im of each coordinate, residual."""
    rows = []
    m = None
    for k, fib in enumerate(fibres):
        radius = radii[k] if radii is not None else float(np.linalg.norm(fib.w))
        for i, (z, r) in enumerate(zip(fib.points, fib.residuals)):
            m = len(z)
            coords = []
            for c in z:
                coords += [repr(float(c.real)), repr(float(c.imag))]
            rows.append([repr(float(radius)), i] + coords + [repr(float(r))])
    header = ["radius", "point"]
    for k in range(m or 0):
        header += [f"re_z{k + 1}", f"im_z{k + 1}"]
    header.append("residual")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        wr.writerows(rows)

