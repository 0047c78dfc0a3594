"""Milnor number of a polynomial germ at the origin."""

from __future__ import annotations

import threading
from typing import Sequence

from .algebra import INFINITE, Polynomial, gradient
from .basis import DEFAULT_DEGREE_CAP, BasisResult, local_standard_basis, quotient_dimension
from .errors import NotIsolatedError, PreconditionError
from .parsing import parse_poly

__all__ = ["Germ", "milnor_number", "is_isolated_singularity", "jacobian_basis"]


class Germ:
    """A polynomial germ f: (C^m, 0) -> (C, 0).

    The Milnor number is cached on first computation; the cache is a single
    guarded assignment so a Germ can be shared between threads.
    """

    def __init__(self, f: Polynomial, vars: Sequence[str] | None = None):
        if vars is not None:
            f = f.in_context(vars)
        if f.constant_term() != 0:
            raise PreconditionError(
                f"germ must vanish at the origin; constant term is {f.constant_term()}"
            )
        if not f.vars:
            raise PreconditionError("germ needs at least one variable")
        self.f = f
        self._mu = None
        self._basis = None
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, text: str, vars: Sequence[str] | None = None) -> "Germ":
        return cls(parse_poly(text, vars))

    @property
    def vars(self) -> tuple:
        return self.f.vars

    @property
    def m(self) -> int:
        return len(self.f.vars)

    @property
    def mu(self):
        return self._mu

    def gradient(self) -> list:
        return gradient(self.f)

    def __repr__(self):
        return f"Germ({str(self.f)!r}, vars={list(self.vars)})"


def jacobian_basis(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> BasisResult:
    if g._basis is None:
        basis = local_standard_basis(g.gradient(), vars=g.vars, degree_cap=degree_cap)
        with g._lock:
            if g._basis is None:
                g._basis = basis
    return g._basis


def _local_mu(g: Germ, degree_cap: int):
    return quotient_dimension(jacobian_basis(g, degree_cap))


def milnor_number(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> int:
    """Dimension of the local algebra O_0 / <df/dz_1, ..., df/dz_m>."""
    if g._mu is not None:
        return g._mu
    mu = _local_mu(g, degree_cap)
    if mu == INFINITE:
        raise NotIsolatedError(f"{g.f} does not have an isolated singularity at 0")
    with g._lock:
        if g._mu is None:
            g._mu = int(mu)
    return g._mu


def is_isolated_singularity(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> bool:
    return _local_mu(g, degree_cap) != INFINITE
