"""Gröbner bases for global orders and Mora standard bases for the local
order ``negdegrevlex``.

Polynomials are handled internally as plain ``{exponent: coefficient}``
dicts; :class:`~lojax.algebra.Polynomial` only appears at the API boundary.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .algebra import INFINITE, Polynomial
from .errors import ResourceCapError

__all__ = [
    "MonomialOrder",
    "BasisResult",
    "DEFAULT_DEGREE_CAP",
    "groebner",
    "local_standard_basis",
    "quotient_dimension",
    "normal_form",
    "eliminate",
    "standard_monomials",
]

DEFAULT_DEGREE_CAP = 30

_KINDS = ("degrevlex", "lex", "negdegrevlex", "block")


@lru_cache(maxsize=1 << 18)
def _order_key(kind: str, blocks: tuple, exp: tuple) -> tuple:
    if kind == "degrevlex":
        return (sum(exp),) + tuple(-e for e in reversed(exp))
    if kind == "negdegrevlex":
        return (-sum(exp),) + tuple(-e for e in reversed(exp))
    if kind == "lex":
        return exp
    # block: degrevlex inside each block, earlier blocks dominate
    key: tuple = ()
    start = 0
    for size in blocks:
        seg = exp[start:start + size]
        key += (sum(seg),) + tuple(-e for e in reversed(seg))
        start += size
    return key


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order.  ``block`` orders use degrevlex inside each block and
    eliminate the earlier blocks first."""

    kind: str = "degrevlex"
    blocks: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and not self.blocks:
            raise ValueError("block order needs block sizes")

    @property
    def is_global(self) -> bool:
        return self.kind != "negdegrevlex"

    def key(self, exp: tuple) -> tuple:
        return _order_key(self.kind, self.blocks, exp)

    def describe(self) -> str:
        if self.kind == "block":
            return f"block{list(self.blocks)}"
        return self.kind


DEGREVLEX = MonomialOrder("degrevlex")
NEGDEGREVLEX = MonomialOrder("negdegrevlex")


@dataclass(frozen=True)
class BasisResult:
    generators: tuple
    order: MonomialOrder
    vars: tuple
    reduced: bool = True
    local: bool = False
    stats: dict = field(default_factory=dict, compare=False)

    def leading_monomials(self) -> list:
        return [max(g.terms, key=self.order.key) for g in self.generators]

    def leading_terms(self) -> list:
        out = []
        for g in self.generators:
            lm = max(g.terms, key=self.order.key)
            out.append(Polynomial({lm: g.terms[lm]}, self.vars))
        return out

    def is_unit_ideal(self) -> bool:
        zero = (0,) * len(self.vars)
        return any(lm == zero for lm in self.leading_monomials())


# ---------------------------------------------------------------------------
# exponent helpers


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


class _Entry:
    """A basis element with cached leading data."""

    __slots__ = ("terms", "lm", "lc", "deg", "sugar", "ecart")

    def __init__(self, terms: dict, key, sugar=None):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]
        self.deg = max(sum(e) for e in terms)
        self.ecart = self.deg - sum(self.lm)
        self.sugar = self.deg if sugar is None else max(sugar, self.deg)


def _monic(terms: dict, lc) -> dict:
    if lc == 1:
        return terms
    inv = 1 / lc
    return {e: c * inv for e, c in terms.items()}


def _check_cap(terms: dict, cap: int):
    for e in terms:
        if sum(e) > cap:
            raise ResourceCapError(f"intermediate polynomial exceeds degree cap {cap}")


def _axpy(h: dict, q, shift: tuple, g: dict, cap: int) -> dict:
    """h - q * x^shift * g, in place on a copy-free dict."""
    for ge, gc in g.items():
        ne = tuple(a + b for a, b in zip(ge, shift))
        nc = h.get(ne, 0) - q * gc
        if nc == 0:
            h.pop(ne, None)
        else:
            if ne not in h and sum(ne) > cap:
                raise ResourceCapError(f"intermediate polynomial exceeds degree cap {cap}")
            h[ne] = nc
    return h


def _spoly(a: _Entry, b: _Entry, cap: int) -> dict:
    l = _lcm(a.lm, b.lm)
    h: dict = {}
    _axpy(h, -1 / a.lc, _sub(l, a.lm), a.terms, cap)
    _axpy(h, 1 / b.lc, _sub(l, b.lm), b.terms, cap)
    return h


# ---------------------------------------------------------------------------
# global orders


def _reduce_full(f: dict, reducers: Sequence[_Entry], key, cap: int) -> dict:
    """Complete reduction of ``f`` modulo ``reducers`` (global order)."""
    h = dict(f)
    heap = [tuple(-k for k in key(e)) + (e,) for e in h]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        item = heapq.heappop(heap)
        e = item[-1]
        c = h.get(e)
        if c is None:
            continue
        for g in reducers:
            if _divides(g.lm, e):
                q = c / g.lc
                shift = _sub(e, g.lm)
                for ge, gc in g.terms.items():
                    ne = tuple(a + b for a, b in zip(ge, shift))
                    old = h.get(ne)
                    nc = (0 if old is None else old) - q * gc
                    if nc == 0:
                        if old is not None:
                            del h[ne]
                    else:
                        if old is None:
                            if sum(ne) > cap:
                                raise ResourceCapError(
                                    f"intermediate polynomial exceeds degree cap {cap}"
                                )
                            heapq.heappush(heap, tuple(-k for k in key(ne)) + (ne,))
                        h[ne] = nc
                break
        else:
            rem[e] = c
            del h[e]
    return rem


class _Buchberger:
    def __init__(self, order: MonomialOrder, cap: int):
        self.key = order.key
        self.cap = cap
        self.polys: list[_Entry] = []
        self.active: list[int] = []
        self.pairs: list[tuple] = []
        self.stats = {"pairs_reduced": 0, "zero_reductions": 0}

    def _pair_item(self, i: int, j: int):
        a, b = self.polys[i], self.polys[j]
        l = _lcm(a.lm, b.lm)
        sugar = max(a.sugar + sum(l) - sum(a.lm), b.sugar + sum(l) - sum(b.lm))
        return (sugar, self.key(l), i, j)

    def update(self, hi: int):
        h = self.polys[hi]
        lm = h.lm
        C = list(self.active)
        D: list[int] = []
        while C:
            g1 = C.pop(0)
            l1 = _lcm(lm, self.polys[g1].lm)
            if _coprime(lm, self.polys[g1].lm) or not any(
                _divides(_lcm(lm, self.polys[g2].lm), l1) for g2 in C + D
            ):
                D.append(g1)
        E = [g for g in D if not _coprime(lm, self.polys[g].lm)]
        kept = []
        for item in self.pairs:
            i, j = item[2], item[3]
            lij = _lcm(self.polys[i].lm, self.polys[j].lm)
            if (
                _divides(lm, lij)
                and _lcm(self.polys[i].lm, lm) != lij
                and _lcm(lm, self.polys[j].lm) != lij
            ):
                continue
            kept.append(item)
        kept.extend(self._pair_item(g, hi) for g in E)
        self.pairs = kept
        self.active = [g for g in self.active if not _divides(lm, self.polys[g].lm)] + [hi]

    def add(self, terms: dict, sugar=None):
        terms = _reduce_full(terms, [self.polys[i] for i in self.active], self.key, self.cap)
        if not terms:
            self.stats["zero_reductions"] += 1
            return
        entry = _Entry(terms, self.key, sugar)
        entry.terms = _monic(entry.terms, entry.lc)
        entry.lc = Fraction(1)
        self.polys.append(entry)
        self.update(len(self.polys) - 1)

    def run(self):
        while self.pairs:
            best = min(range(len(self.pairs)), key=lambda k: self.pairs[k])
            sugar, _, i, j = self.pairs.pop(best)
            self.stats["pairs_reduced"] += 1
            s = _spoly(self.polys[i], self.polys[j], self.cap)
            if s:
                self.add(s, sugar)
            else:
                self.stats["zero_reductions"] += 1
        # interreduce tails
        basis = [self.polys[i] for i in self.active]
        out = []
        for k, g in enumerate(basis):
            others = basis[:k] + basis[k + 1:]
            tail = {e: c for e, c in g.terms.items() if e != g.lm}
            red = _reduce_full(tail, others, self.key, self.cap)
            red[g.lm] = Fraction(1)
            out.append(red)
        out.sort(key=lambda t: self.key(max(t, key=self.key)))
        return out


def _context(gens: Sequence[Polynomial], vars: Sequence[str] | None) -> tuple:
    if vars is not None:
        return tuple(vars)
    ctx: list[str] = []
    for g in gens:
        for v in g.vars:
            if v not in ctx:
                ctx.append(v)
    return tuple(ctx)


def groebner(
    gens: Iterable[Polynomial],
    order: MonomialOrder = DEGREVLEX,
    *,
    vars: Sequence[str] | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> BasisResult:
    """Reduced Gröbner basis (Buchberger, sugar selection, Gebauer-Möller criteria)."""
    if not order.is_global:
        raise ValueError("groebner needs a global order; use local_standard_basis")
    gens = list(gens)
    ctx = _context(gens, vars)
    bb = _Buchberger(order, degree_cap)
    for g in gens:
        g = g.in_context(ctx)
        if g.terms:
            _check_cap(g.terms, degree_cap)
            bb.add(dict(g.terms))
    out = bb.run()
    polys = tuple(Polynomial._raw(t, ctx) for t in out)
    return BasisResult(polys, order, ctx, reduced=True, local=False, stats=bb.stats)


# ---------------------------------------------------------------------------
# local order: Mora normal form


def _mora_nf(f: dict, basis: Sequence[_Entry], key, cap: int) -> dict:
    """Weak normal form w.r.t. a local order (Mora, ecart-minimal reducers).

    Returns h with u*f - h in the ideal for some unit u, and either h == 0 or
    LM(h) not divisible by any leading monomial of ``basis``.
    """
    h = dict(f)
    T: list[_Entry] = list(basis)
    while h:
        lm = max(h, key=key)
        best = None
        for g in T:
            if _divides(g.lm, lm) and (best is None or g.ecart < best.ecart):
                best = g
        if best is None:
            break
        deg = max(sum(e) for e in h)
        ecart_h = deg - sum(lm)
        if best.ecart > ecart_h:
            T.append(_Entry(dict(h), key))
        q = h[lm] / best.lc
        _axpy(h, q, _sub(lm, best.lm), best.terms, cap)
    return h


def local_standard_basis(
    gens: Iterable[Polynomial],
    *,
    vars: Sequence[str] | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> BasisResult:
    """Standard basis for ``negdegrevlex`` via Mora's tangent cone algorithm.

    The output is minimal and monic.  Tails are not reduced: full tail
    reduction does not terminate for local orders in general.
    """
    order = NEGDEGREVLEX
    key = order.key
    gens = list(gens)
    ctx = _context(gens, vars)
    G: list[_Entry] = []
    for g in gens:
        g = g.in_context(ctx)
        if g.terms:
            _check_cap(g.terms, degree_cap)
            e = _Entry(_monic(dict(g.terms), g.terms[max(g.terms, key=key)]), key)
            G.append(e)
    pairs = [(i, j) for i in range(len(G)) for j in range(i + 1, len(G))]
    stats = {"pairs_reduced": 0, "zero_reductions": 0}

    def pair_key(p):
        a, b = G[p[0]], G[p[1]]
        l = _lcm(a.lm, b.lm)
        return (sum(l), tuple(-k for k in key(l)), p)

    while pairs:
        best = min(range(len(pairs)), key=lambda k: pair_key(pairs[k]))
        i, j = pairs.pop(best)
        a, b = G[i], G[j]
        stats["pairs_reduced"] += 1
        if _coprime(a.lm, b.lm):
            # product criterion holds for standard bases as well
            stats["zero_reductions"] += 1
            continue
        s = _spoly(a, b, degree_cap)
        h = _mora_nf(s, G, key, degree_cap)
        if not h:
            stats["zero_reductions"] += 1
            continue
        e = _Entry(h, key)
        e.terms = _monic(e.terms, e.lc)
        e.lc = Fraction(1)
        G.append(e)
        n = len(G) - 1
        pairs.extend((k, n) for k in range(n))
    # minimalize
    keep = []
    for k, g in enumerate(G):
        redundant = False
        for l, o in enumerate(G):
            if l == k:
                continue
            if _divides(o.lm, g.lm) and (o.lm != g.lm or l < k):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    keep.sort(key=lambda g: tuple(-k for k in key(g.lm)))
    polys = tuple(Polynomial._raw(g.terms, ctx) for g in keep)
    return BasisResult(polys, order, ctx, reduced=True, local=True, stats=stats)


# ---------------------------------------------------------------------------
# queries


def standard_monomials(basis: BasisResult, limit: int = 100_000):
    """Monomials outside the leading ideal, or None if there are infinitely many."""
    lms = basis.leading_monomials()
    if any(sum(lm) == 0 for lm in lms):
        return []
    n = len(basis.vars)
    bounds = []
    for k in range(n):
        pure = [lm[k] for lm in lms if lm[k] and sum(lm) == lm[k]]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []
    size = 1
    for b in bounds:
        size *= b
    if size > limit:
        raise ResourceCapError(f"staircase box of size {size} exceeds {limit}")
    for exp in product(*(range(b) for b in bounds)):
        if not any(_divides(lm, exp) for lm in lms):
            out.append(exp)
    out.sort(key=lambda e: (sum(e), e))
    return out


def quotient_dimension(basis: BasisResult):
    """Number of standard monomials; INFINITE when the staircase is unbounded."""
    mons = standard_monomials(basis)
    if mons is None:
        return INFINITE
    return len(mons)


def normal_form(p: Polynomial, basis: BasisResult) -> Polynomial:
    """Remainder modulo the basis.  For local bases this is Mora's weak normal
    form: zero exactly when ``p`` lies in the ideal of the localization."""
    p = p.in_context(basis.vars)
    key = basis.order.key
    entries = [_Entry(dict(g.terms), key) for g in basis.generators]
    cap = max([DEFAULT_DEGREE_CAP, p.degree() if p.terms else 0]) * 2
    if basis.local:
        out = _mora_nf(dict(p.terms), entries, key, cap)
    else:
        out = _reduce_full(dict(p.terms), entries, key, cap)
    return Polynomial._raw(out, basis.vars)


def eliminate(
    gens: Iterable[Polynomial],
    drop: Sequence[str],
    *,
    vars: Sequence[str] | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> list:
    """Generators of the elimination ideal obtained by dropping ``drop``.

    Uses a block order with the dropped variables in the first block; the
    result lives in the remaining variables, in their original order.
    """
    gens = list(gens)
    ctx = _context(gens, vars)
    drop = tuple(drop)
    missing = [v for v in drop if v not in ctx]
    if missing:
        raise ValueError(f"cannot drop unknown variables {missing}")
    keep = tuple(v for v in ctx if v not in drop)
    if not keep:
        raise ValueError("eliminating every variable leaves nothing")
    ordered = drop + keep
    order = MonomialOrder("block", (len(drop), len(keep)))
    gb = groebner([g.in_context(ordered) for g in gens], order, vars=ordered, degree_cap=degree_cap)
    nd = len(drop)
    out = []
    for g in gb.generators:
        if all(not any(e[:nd]) for e in g.terms):
            out.append(g.in_context(keep))
    return out
