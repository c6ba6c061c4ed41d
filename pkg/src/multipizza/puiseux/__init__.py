"""Exact plane-curve machinery: polynomials, algebraic coefficients, Newton-Puiseux roots, arcs."""

from .arcs import X_OF_Y, Y_OF_X, PuiseuxArc, ord_along, puiseux_roots, sign_along, tord
from .numberfield import Alg, NumberField
from .polynomial import Polynomial, parse_polynomial

__all__ = [
    "Alg", "NumberField", "Polynomial", "PuiseuxArc", "X_OF_Y", "Y_OF_X",
    "ord_along", "parse_polynomial", "puiseux_roots", "sign_along", "tord",
]
