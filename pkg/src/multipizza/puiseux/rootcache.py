"""Factorization over Q and memoized root systems."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import sympy

from .newton import RootSystem, exponent_cap, root_system
from .polynomial import Polynomial

_X, _Y = sympy.symbols("x y")


def squarefree_parts(g: Polynomial) -> List[Tuple[Polynomial, int]]:
    """[(squarefree factor, multiplicity)], constants dropped."""
    return list(_sqf_cached(g))


@lru_cache(maxsize=1024)
def _sqf_cached(g: Polynomial):
    _, parts = sympy.Poly(g.to_sympy(_X, _Y), _X, _Y, domain="QQ").sqf_list()
    return tuple((Polynomial.from_sympy(p.as_expr(), _X, _Y), int(m)) for p, m in parts)


def irreducible_factors(g: Polynomial) -> Tuple[Fraction, List[Tuple[Polynomial, int]]]:
    """Content and irreducible factors over Q with multiplicities."""
    const, facs = _factor_cached(g)
    return const, list(facs)


@lru_cache(maxsize=1024)
def _factor_cached(g: Polynomial):
    const, facs = sympy.Poly(g.to_sympy(_X, _Y), _X, _Y, domain="QQ").factor_list()
    out = []
    for p, m in facs:
        poly = Polynomial.from_sympy(p.as_expr(), _X, _Y)
        # normalise sign so the lowest monomial coefficient is positive
        first = next(iter(poly.terms.values()))
        if first < 0:
            poly = -poly
            if m % 2:
                const = -const
        out.append((poly, int(m)))
    out.sort(key=lambda pm: pm[0].to_text())
    return Fraction(str(const)), tuple(out)


def cached_root_system(g: Polynomial, cap: Fraction | None = None) -> RootSystem:
    return _roots_cached(g, exponent_cap() if cap is None else cap)


@lru_cache(maxsize=2048)
def _roots_cached(g: Polynomial, cap: Fraction) -> RootSystem:
    return root_system(g, cap)
