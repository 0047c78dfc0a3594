"""Milnor numbers, characteristic polynomials and gradient-inequality exponents
for polynomial germs with an isolated singularity at the origin."""

__version__ = "0.1.0"

from .algebra import INFINITE, Polynomial, evaluate, gradient, initial_form, ord_zero, substitute
from .parsing import parse_poly

__all__ = [
    "INFINITE",
    "Polynomial",
    "evaluate",
    "gradient",
    "initial_form",
    "ord_zero",
    "parse_poly",
    "substitute",
]
