"""Independent reference computations used to check the library.

Nothing here imports lojax: univariate polynomials are plain coefficient
lists (highest degree first) over Fraction, determinants are computed by
Fraction Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod


def det(matrix) -> Fraction:
    """Exact determinant by Gaussian elimination over Q."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return sign * prod(a[i][i] for i in range(n))


def sylvester(p, q):
    """Sylvester matrix of p, q given as coefficient lists, highest first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(p) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(q) + [0] * (size - n - 1 - i))
    return rows


def resultant(p, q) -> Fraction:
    return det(sylvester(p, q))


def monomial_power_case(d: int, w0, t0) -> Fraction:
    """Res_z(d z^(d-1) - w0, t0 - z^d)."""
    g = [Fraction(d)] + [0] * (d - 2) + [-Fraction(w0)]
    f = [Fraction(-1)] + [0] * (d - 1) + [Fraction(t0)]
    return resultant(g, f)


def closed_form_charpoly(d: int, w0, t0) -> Fraction:
    """t^(d-1) - (w/d)^d at (w0, t0)."""
    return Fraction(t0) ** (d - 1) - (Fraction(w0) / d) ** d


def brieskorn_mu(exponents) -> int:
    return prod(a - 1 for a in exponents)
