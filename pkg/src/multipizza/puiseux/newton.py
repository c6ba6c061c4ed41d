"""Newton polygons and real Newton-Puiseux branches.

Internally a bivariate object is ``h(x, z) = sum_j h_j(x) z^j`` stored as
``{j: {exponent: coeff}}`` where the x-exponents are Fractions (after a
substitution ``z -> c x^e + z`` they need not be integers).  Roots are looked
for as series ``z = c1 x^e1 + c2 x^e2 + ...`` with increasing exponents.

Real branches are expanded lazily.  Non-real roots are not expanded: a group
of them sharing a real prefix is kept as a :class:`Cluster` together with the
exponent ``kappa`` at which their first non-real coefficient sits; for any
real arc the contact with such a root is ``min(kappa, contact with prefix)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import TruncationTooShallow, ZeroPolynomial
from ..scalars import INFINITY, ExtRat
from . import numberfield as nf
from .numberfield import Coeff
from .polynomial import Polynomial

XPoly = Dict[Fraction, Coeff]
BiPoly = Dict[int, XPoly]

# exponents beyond this are never expanded (guards pathological inputs)
DEFAULT_EXPONENT_CAP = Fraction(50)
_exponent_cap = DEFAULT_EXPONENT_CAP


def exponent_cap() -> Fraction:
    return _exponent_cap


def set_exponent_cap(value) -> Fraction:
    """Change the expansion cap for roots computed from now on; returns the old cap."""
    global _exponent_cap
    value = Fraction(value)
    if value <= 0:
        raise ValueError("the exponent cap must be positive")
    old, _exponent_cap = _exponent_cap, value
    return old


def bipoly_from_polynomial(f: Polynomial) -> BiPoly:
    out: BiPoly = {}
    for (i, j), c in f.terms.items():
        out.setdefault(j, {})[Fraction(i)] = c
    return out


def _xpoly_add_into(target: XPoly, e: Fraction, c: Coeff):
    cur = target.get(e)
    val = c if cur is None else nf.add(cur, c)
    if nf.is_zero(val):
        target.pop(e, None)
    else:
        target[e] = val


def xpoly_order(p: XPoly) -> ExtRat:
    return min(p) if p else INFINITY


def shift(h: BiPoly, c: Coeff, e: Fraction) -> BiPoly:
    """h(x, z + c x^e)."""
    out: BiPoly = {}
    powers: Dict[int, Coeff] = {0: Fraction(1)}
    top = max(h) if h else 0
    for k in range(1, top + 1):
        powers[k] = nf.mul(powers[k - 1], c)
    for j, hj in h.items():
        for jj in range(j + 1):
            k = j - jj
            factor = nf.mul(Fraction(comb(j, jj)), powers[k])
            if nf.is_zero(factor):
                continue
            dest = out.setdefault(jj, {})
            for ex, a in hj.items():
                _xpoly_add_into(dest, ex + e * k, nf.mul(a, factor))
    return {j: p for j, p in out.items() if p}


def map_coefficients(h: BiPoly, fn) -> BiPoly:
    return {j: {e: fn(c) for e, c in p.items()} for j, p in h.items()}


@dataclass(frozen=True)
class Edge:
    """An edge of the Newton polygon from (j1, k1) to (j2, k2), j1 < j2.

    ``exponent`` is (k1 - k2) / (j2 - j1); ``characteristic`` lists the
    coefficients of sum_j a_{j,k} c^(j - j1), low to high.
    """

    start: Tuple[int, Fraction]
    end: Tuple[int, Fraction]
    exponent: Fraction
    characteristic: Tuple[Coeff, ...]


def newton_edges(h: BiPoly) -> List[Edge]:
    """Lower-left hull edges of {(j, ord h_j)} ordered by increasing exponent."""
    pts = sorted((j, xpoly_order(p)) for j, p in h.items() if p)
    if not pts:
        raise ZeroPolynomial("empty support")
    hull: List[Tuple[int, Fraction]] = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    # edges with negative exponent describe roots that blow up as x -> 0;
    # they are kept because the order formula needs every root
    edges = []
    for (j1, k1), (j2, k2) in zip(hull, hull[1:]):
        e = (k1 - k2) / (j2 - j1)
        char = []
        for j in range(j1, j2 + 1):
            k = k1 - e * (j - j1)
            char.append(h.get(j, {}).get(k, Fraction(0)))
        edges.append(Edge((j1, k1), (j2, k2), e, tuple(char)))
    edges.sort(key=lambda ed: ed.exponent)
    return edges


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass
class Cluster:
    """Non-real roots sharing a real prefix up to (excluding) exponent kappa."""

    prefix: Tuple[Tuple[Fraction, Coeff], ...]
    kappa: Fraction
    weight: int


class RealBranch:
    """A real root series, expanded on demand.

    ``terms`` holds the known (exponent, coefficient) pairs.  When ``exact`` is
    set the series is a finite sum and all later coefficients vanish.
    """

    def __init__(self, terms, h: BiPoly, last: Fraction, multiplicity: int,
                 exact: bool, cap: Fraction = DEFAULT_EXPONENT_CAP):
        self.terms: List[Tuple[Fraction, Coeff]] = list(terms)
        self._h = h
        self._last = last
        self.multiplicity = multiplicity
        self.exact = exact
        self.cap = cap
        self.origin: Optional[Polynomial] = None

    @property
    def known_until(self) -> ExtRat:
        """Coefficients at all exponents strictly below this value are known."""
        if self.exact:
            return INFINITY
        return self._next_edge()[0]

    def _next_edge(self):
        h = self._h
        k0 = xpoly_order(h[0])
        k1 = xpoly_order(h.get(1, {}))
        if k1 is INFINITY or k0 - k1 <= self._last:
            edges = [ed for ed in newton_edges(h) if ed.exponent > self._last and ed.start[0] == 0]
            if not edges or edges[-1].end[0] != 1:
                raise TruncationTooShallow("simple branch lost its linear Newton edge")
            k0, k1 = edges[-1].start[1], edges[-1].end[1]
        return k0 - k1, k0, k1

    def _step(self):
        h = self._h
        if not h.get(0):
            self.exact = True
            self._h = {}
            return
        if self._last > self.cap:
            raise TruncationTooShallow(f"root expansion exceeded exponent cap {self.cap}")
        e, k0, k1 = self._next_edge()
        c = nf.neg(nf.mul(h[0][k0], nf.inv(h[1][k1])))
        self.terms.append((e, c))
        self._h = shift(h, c, e)
        self._last = e
        if not self._h.get(0):
            self.exact = True
            self._h = {}

    def ensure(self, exponent: ExtRat):
        """Expand until every coefficient at exponents <= ``exponent`` is known."""
        if exponent is INFINITY and not self.exact:
            raise TruncationTooShallow("cannot expand a non-terminating root to infinity")
        while not self.exact and self.known_until <= exponent:
            self._step()

    def next_term_after(self, exponent: Optional[Fraction]) -> Optional[Tuple[Fraction, Coeff]]:
        """The first term with exponent strictly greater than ``exponent`` (None: the first)."""
        while True:
            for e, c in self.terms:
                if exponent is None or e > exponent:
                    return (e, c)
            if self.exact:
                return None
            self._step()

    def coefficient(self, exponent: Fraction) -> Coeff:
        self.ensure(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return Fraction(0)

    def truncation(self) -> Tuple[Tuple[Tuple[Fraction, Coeff], ...], ExtRat]:
        return tuple(self.terms), self.known_until


@dataclass
class RootSystem:
    """All roots (in z) of a bivariate polynomial over a base point.

    ``lead_order``/``lead_sign``: order in x and sign of the lowest term of the
    leading coefficient a_d(x), so that
    ``ord(g along y=phi) = lead_order + sum over roots of v(phi - root)``.
    """

    lead_order: Fraction
    lead_sign: int
    real: List[RealBranch] = dc_field(default_factory=list)
    clusters: List[Cluster] = dc_field(default_factory=list)
    degree: int = 0


def root_system(f: Polynomial, cap: Optional[Fraction] = None) -> RootSystem:
    """Roots of f(x, y) = 0 as series y(x) for x > 0.

    ``f`` should be squarefree for the expansion to terminate; repeated
    factors are handled by the caller through multiplicities.
    """
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial has no roots")
    cap = _exponent_cap if cap is None else cap
    h = bipoly_from_polynomial(f)
    d = max(h)
    lead = h[d]
    lo = xpoly_order(lead)
    system = RootSystem(lo, nf.sign(lead[lo]), degree=d)
    _expand(h, (), None, system, cap)
    for branch in system.real:
        branch.origin = f
    return system


def _expand(h: BiPoly, prefix, last, system: RootSystem, cap, mult_scale: int = 1):
    """Collect the roots of h with leading exponent > last (all if last is None)."""
    zero_mult = min(h) if h else 0
    if zero_mult > 0:
        system.real.append(RealBranch(prefix, {}, last if last is not None else Fraction(0),
                                      zero_mult * mult_scale, exact=True, cap=cap))
        h = {j - zero_mult: p for j, p in h.items()}
    if max(h, default=0) == 0:
        return
    for ed in newton_edges(h):
        if last is not None and ed.exponent <= last:
            continue
        roots, n_nonreal = nf.real_roots(ed.characteristic)
        if n_nonreal:
            system.clusters.append(Cluster(tuple(prefix), ed.exponent, n_nonreal * mult_scale))
        for c, r in roots:
            hh, pre = h, prefix
            emb = getattr(c, "embedding", None)
            if emb is not None:
                hh = map_coefficients(h, emb)
                pre = tuple((e, emb(a)) for e, a in prefix)
                c = nf.Alg(c.field, c.coeffs)
            shifted = shift(hh, c, ed.exponent)
            new_prefix = pre + ((ed.exponent, c),)
            if r == 1:
                branch = RealBranch(new_prefix, shifted, ed.exponent, mult_scale, exact=False, cap=cap)
                if not shifted.get(0):
                    branch.exact = True
                    branch._h = {}
                system.real.append(branch)
            else:
                _expand_multiple(shifted, new_prefix, ed.exponent, r, system, cap, mult_scale)


def _expand_multiple(h, prefix, last, r, system, cap, mult_scale):
    """Roots of h near z = 0 (r of them, counted with multiplicity)."""
    if last > cap:
        raise TruncationTooShallow("multiple root did not separate below the exponent cap")
    # only edges steeper than ``last`` are taken, and they span j in [0, r]
    _expand(h, prefix, last, system, cap, mult_scale)


def newton_polygon(f: Polynomial, chart: str = "y_of_x") -> List[Edge]:
    """Newton polygon edges of f in the given chart (dependent variable last)."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no Newton polygon")
    g = f if chart == "y_of_x" else f.swap()
    return newton_edges(bipoly_from_polynomial(g))
