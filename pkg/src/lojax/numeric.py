"""Packed complex polynomial maps and the numeric backend switch.

The compiled ``_kernels`` extension is used when importable; setting
``LOJAX_PURE=1`` (or calling :func:`set_backend`) selects the numpy
fallback.  Results agree to rounding, not bit-for-bit, across backends.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _pykernels
from .algebra import Polynomial
from .field import to_complex

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

__all__ = [
    "PolyMap",
    "NewtonSystem",
    "compile_map",
    "compile_system",
    "eval_points",
    "backend_name",
    "set_backend",
    "available_backends",
]

_backend = _pykernels if (_compiled is None or os.environ.get("LOJAX_PURE")) else _compiled


def backend_name() -> str:
    return _backend.NAME


def available_backends() -> list:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def set_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global _backend
    prev = _backend.NAME
    if name == "python":
        _backend = _pykernels
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _backend = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")
    return prev


@dataclass(frozen=True)
class PolyMap:
    """A list of polynomials packed into flat arrays for the kernels."""

    vars: tuple
    npolys: int
    exps: np.ndarray
    coeffs: np.ndarray
    offsets: np.ndarray
    maxdeg: int

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __call__(self, Z) -> np.ndarray:
        return eval_points(self, Z)


def compile_map(polys: Sequence[Polynomial], vars: Sequence[str]) -> PolyMap:
    vars = tuple(vars)
    exps: list = []
    coeffs: list = []
    offsets = [0]
    maxdeg = 0
    for p in polys:
        p = p.in_context(vars)
        items = p.sorted_terms(descending=False)
        if not items:
            items = [((0,) * len(vars), 0)]
        for e, c in items:
            exps.append(e)
            coeffs.append(to_complex(c) if c != 0 else 0j)
            maxdeg = max(maxdeg, max(e, default=0))
        offsets.append(len(exps))
    exps_arr = np.ascontiguousarray(np.array(exps, dtype=np.int64).reshape(len(exps), len(vars)))
    return PolyMap(
        vars,
        len(offsets) - 1,
        exps_arr,
        np.ascontiguousarray(np.array(coeffs, dtype=np.complex128)),
        np.ascontiguousarray(np.array(offsets, dtype=np.int64)),
        maxdeg,
    )


def eval_points(pm: PolyMap, Z) -> np.ndarray:
    """Values of every polynomial of ``pm`` at each row of ``Z``: shape (N, npolys)."""
    Z = np.ascontiguousarray(np.atleast_2d(np.asarray(Z, dtype=np.complex128)))
    if Z.shape[1] != pm.nvars:
        raise ValueError(f"points have dimension {Z.shape[1]}, map has {pm.nvars} variables")
    return _backend.eval_map(pm.exps, pm.coeffs, pm.offsets, pm.maxdeg, Z)


@dataclass(frozen=True)
class NewtonSystem:
    """A square map g and its Jacobian, ready for batched Newton solves."""

    g: PolyMap
    jac: PolyMap

    @property
    def m(self) -> int:
        return self.g.npolys

    def newton(self, W, Z0, tol: float, maxit: int):
        Z0 = np.ascontiguousarray(np.atleast_2d(np.asarray(Z0, dtype=np.complex128)))
        W = np.asarray(W, dtype=np.complex128)
        if W.ndim == 1:
            W = np.broadcast_to(W, Z0.shape)
        W = np.array(W, order="C")
        maxdeg = max(self.g.maxdeg, self.jac.maxdeg)
        return _backend.newton_batch(
            self.g.exps, self.g.coeffs, self.g.offsets,
            self.jac.exps, self.jac.coeffs, self.jac.offsets,
            maxdeg, W, Z0, float(tol), int(maxit),
        )


def compile_system(polys: Sequence[Polynomial], vars: Sequence[str]) -> NewtonSystem:
    vars = tuple(vars)
    if len(polys) != len(vars):
        raise ValueError(f"square system needed: {len(polys)} equations, {len(vars)} unknowns")
    jac = [p.in_context(vars).derivative(v) for p in polys for v in vars]
    return NewtonSystem(compile_map(polys, vars), compile_map(jac, vars))
