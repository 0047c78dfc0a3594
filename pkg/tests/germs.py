"""Shared germ corpora for the tests."""

import random

from lojax import Polynomial
from lojax.milnor import Germ, is_isolated_singularity

XY = ("x", "y")
BRIESKORN = [(a, b) for a in (2, 3, 4) for b in (2, 3, 4)]


def brieskorn(a, b) -> Germ:
    return Germ.parse(f"x^{a} + y^{b}", XY)


def random_forms(count: int, seed: int = 2024):
    """Dense binary forms of degree 2..4 with an isolated critical point.

    Homogeneous gradients vanish only at the origin, so these germs pass
    the global/local gate of the exact path.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.choice([2, 3, 4])
        terms = {(i, d - i): rng.randint(-4, 4) for i in range(d + 1)}
        if any(c == 0 for c in terms.values()):
            continue  # keep them dense
        g = Germ(Polynomial(terms, XY))
        if not is_isolated_singularity(g):
            continue
        out.append(g)
    return out
