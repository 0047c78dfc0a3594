"""Exact multivariate polynomials over Q and Q(i).

A :class:`Polynomial` is an immutable map from exponent tuples to exact
scalars, tagged with an ordered tuple of variable names.  Binary operations
on polynomials with different contexts first embed both into the union
context (left operand's names first).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import GaussianRational, as_scalar, is_scalar, scalar_str, to_complex

__all__ = [
    "INFINITE",
    "Polynomial",
    "gradient",
    "ord_zero",
    "initial_form",
    "evaluate",
    "substitute",
    "grlex_key",
]

INFINITE = math.inf

Exp = tuple


def grlex_key(exp: Exp):
    return (sum(exp), exp)


def _add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[Exp, object] | None = None, vars: Sequence[str] = ()):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent {exp}")
                c = as_scalar(c)
                if c != 0:
                    clean[exp] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, vars: tuple) -> "Polynomial":
        # terms already clean: canonical scalars, no zeros
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str] = ()) -> "Polynomial":
        return cls._raw({}, tuple(vars))

    @classmethod
    def constant(cls, c, vars: Sequence[str] = ()) -> "Polynomial":
        vars = tuple(vars)
        c = as_scalar(c)
        return cls._raw({(0,) * len(vars): c} if c != 0 else {}, vars)

    @classmethod
    def variable(cls, name: str, vars: Sequence[str]) -> "Polynomial":
        vars = tuple(vars)
        exp = tuple(1 if v == name else 0 for v in vars)
        if sum(exp) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls._raw({exp: Fraction(1)}, vars)

    @classmethod
    def monomial(cls, exp: Exp, vars: Sequence[str], c=1) -> "Polynomial":
        return cls({tuple(exp): c}, vars)

    # -- basic queries ---------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self):
        if not self.terms:
            return -INFINITE
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str):
        k = self.vars.index(var)
        if not self.terms:
            return -INFINITE
        return max(e[k] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_gaussian(self) -> bool:
        return any(isinstance(c, GaussianRational) for c in self.terms.values())

    def sorted_terms(self, descending: bool = True):
        return sorted(self.terms.items(), key=lambda it: grlex_key(it[0]), reverse=descending)

    def used_vars(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vars) if any(e[k] for e in self.terms))

    # -- contexts -------------------------------------------------------
    def in_context(self, vars: Sequence[str]) -> "Polynomial":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        index = {v: k for k, v in enumerate(vars)}
        for k, v in enumerate(self.vars):
            if v not in index and any(e[k] for e in self.terms):
                raise ValueError(f"variable {v!r} is used but missing from context {vars}")
        pos = [(index[v], k) for k, v in enumerate(self.vars) if v in index]
        out = {}
        for exp, c in self.terms.items():
            new = [0] * len(vars)
            for j, k in pos:
                new[j] = exp[k]
            out[tuple(new)] = c
        return Polynomial._raw(out, vars)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.vars == self.vars:
                return self, other
            vars = self.vars + tuple(v for v in other.vars if v not in self.vars)
            return self.in_context(vars), other.in_context(vars)
        if is_scalar(other):
            return self, Polynomial.constant(other, self.vars)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial._raw(out, a.vars)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if is_scalar(other):
            c = as_scalar(other)
            if c == 0:
                return Polynomial.zero(self.vars)
            return Polynomial._raw({e: v * c for e, v in self.terms.items()}, self.vars)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = _add_exp(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw({e: c for e, c in out.items() if c != 0}, a.vars)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if is_scalar(other):
            return self * (1 / as_scalar(other))
        if isinstance(other, Polynomial) and other.is_constant() and other.terms:
            return self * (1 / other.constant_term())
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        result = Polynomial.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                pair = self._coerce(other)
                a, b = pair
                return a.terms == b.terms
            return self.terms == other.terms
        if is_scalar(other):
            c = as_scalar(other)
            if c == 0:
                return not self.terms
            return self.terms == {(0,) * self.nvars: c}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            used = self.used_vars()
            p = self.in_context(used)
            self._hash = hash((used, frozenset(p.terms.items())))
        return self._hash

    # -- calculus and structure --------------------------------------------
    def derivative(self, var: str) -> "Polynomial":
        k = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = e[:k] + (e[k] - 1,) + e[k + 1:]
                out[ne] = c * e[k]
        return Polynomial._raw(out, self.vars)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw({e: c for e, c in self.terms.items() if sum(e) == d}, self.vars)

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Polynomial._raw(t, self.vars) for d, t in sorted(parts.items())}

    def coefficients_in(self, var: str) -> dict:
        """Split as sum_k var^k * p_k; returns {k: p_k} with var dropped from p_k."""
        k = self.vars.index(var)
        rest = self.vars[:k] + self.vars[k + 1:]
        out: dict = {}
        for e, c in self.terms.items():
            out.setdefault(e[k], {})[e[:k] + e[k + 1:]] = c
        return {d: Polynomial._raw(t, rest) for d, t in sorted(out.items())}

    def map_coefficients(self, fn) -> "Polynomial":
        return Polynomial({e: fn(c) for e, c in self.terms.items()}, self.vars)

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exp) if e
            )
            if isinstance(c, GaussianRational):
                neg = c.re == 0 and c.im < 0
                cs = scalar_str(-c if neg else c)
            else:
                neg = c < 0
                cs = str(abs(c))
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            pieces.append(("-" if neg else "+", body))
        head_sign, head = pieces[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({str(self)!r}, vars={list(self.vars)})"


# ---------------------------------------------------------------------------
# module-level operations


def gradient(f: Polynomial, wrt: Iterable[str] | None = None) -> list:
    wrt = f.vars if wrt is None else tuple(wrt)
    missing = [v for v in wrt if v not in f.vars]
    if missing:
        raise ValueError(f"variables {missing} not in context {f.vars}")
    return [f.derivative(v) for v in wrt]


def ord_zero(p: Polynomial):
    """Order of vanishing at the origin; INFINITE for the zero polynomial."""
    if not p.terms:
        return INFINITE
    return min(sum(e) for e in p.terms)


def initial_form(p: Polynomial) -> Polynomial:
    if not p.terms:
        raise ValueError("initial form of the zero polynomial is undefined")
    return p.homogeneous_part(ord_zero(p))


def evaluate(p: Polynomial, z: Sequence[complex]) -> complex:
    """Evaluate at a complex point; terms are summed in ascending grlex order."""
    z = [complex(v) for v in z]
    if len(z) != p.nvars:
        raise ValueError(f"point has dimension {len(z)}, polynomial has {p.nvars} variables")
    powers: list[list[complex]] = [[1.0 + 0j] for _ in z]
    total = 0j
    for exp, c in p.sorted_terms(descending=False):
        term = to_complex(c)
        for k, e in enumerate(exp):
            if e:
                pw = powers[k]
                while len(pw) <= e:
                    pw.append(pw[-1] * z[k])
                term *= pw[e]
        total += term
    return total


def substitute(p: Polynomial, bindings: Mapping[str, object]) -> Polynomial:
    """Replace variables by exact scalars or polynomials.

    The result lives in the unbound variables of ``p`` followed by any new
    variables introduced by the bound polynomials.
    """
    for v in bindings:
        if v not in p.vars:
            raise ValueError(f"cannot bind {v!r}: not in context {p.vars}")
    free = tuple(v for v in p.vars if v not in bindings)
    extra: list[str] = []
    for val in bindings.values():
        if isinstance(val, Polynomial):
            for v in val.vars:
                if v not in free and v not in extra and v in val.used_vars():
                    extra.append(v)
    ctx = free + tuple(extra)
    values = {}
    for v, val in bindings.items():
        if isinstance(val, Polynomial):
            values[v] = val.in_context(ctx)
        else:
            values[v] = Polynomial.constant(as_scalar(val), ctx)
    bound_idx = [(k, v) for k, v in enumerate(p.vars) if v in bindings]
    free_idx = [k for k, v in enumerate(p.vars) if v not in bindings]
    pow_cache: dict = {}

    def power(v, e):
        key = (v, e)
        if key not in pow_cache:
            pow_cache[key] = values[v] ** e
        return pow_cache[key]

    # group by the bound part of each exponent
    groups: dict = {}
    for exp, c in p.terms.items():
        bexp = tuple(exp[k] for k, _ in bound_idx)
        fexp = tuple(exp[k] for k in free_idx) + (0,) * len(extra)
        groups.setdefault(bexp, {})[fexp] = c
    result = Polynomial.zero(ctx)
    for bexp, fterms in sorted(groups.items()):
        factor = Polynomial._raw(dict(fterms), ctx)
        for (k, v), e in zip(bound_idx, bexp):
            if e:
                factor = factor * power(v, e)
        result = result + factor
    return result
