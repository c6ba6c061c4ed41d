"""Contact structure of functions on a Hölder triangle given in one chart.

Everything happens in local coordinates (u, v) of a :class:`Frame`, where
arcs are graphs v = phi(u), u > 0, and phi is a Puiseux series.  For a
function g the order along an arc is

    ord(phi) = A + sum over roots r of weight(r) * contact(phi, r)

where ``A`` is the order of the leading y-coefficient, real roots contribute
the first exponent where phi and the root differ, and a group of non-real
roots contributes ``min(kappa, contact with its real prefix)``.  The same
data gives the sign of the leading coefficient.

From the finite set of "points" (real roots, non-real prefixes, boundary
arcs) we build the vertices of their contact tree.  Picking one arc in every
gap between the special coefficients at every vertex gives a fine
decomposition of the triangle: between two consecutive arcs every function
changes its order linearly with the depth of departure from one of the two
ends, so each piece is an elementary slice with an affine width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import InternalValidationFailure
from .puiseux import numberfield as nf
from .puiseux.arcs import PuiseuxArc, X_OF_Y, Y_OF_X, arc_from_branch, local_polynomial
from .puiseux.newton import RealBranch
from .puiseux.numberfield import Coeff
from .puiseux.polynomial import Polynomial
from .puiseux.rootcache import cached_root_system, irreducible_factors
from .scalars import INFINITY, AffineMap, ExtRat, Segment


@dataclass(frozen=True)
class Frame:
    """Local coordinates: swap=False means (x, y) = (sx*u, sy*v), else (sx*v, sy*u)."""

    sx: int = 1
    sy: int = 1
    swap: bool = False

    @property
    def chart(self) -> str:
        return X_OF_Y if self.swap else Y_OF_X

    @property
    def sector(self) -> Tuple[int, int]:
        return (self.sx, self.sy)

    def local(self, f: Polynomial) -> Polynomial:
        return local_polynomial(f, self.chart, self.sector)


class Series:
    """A local arc: either an exact finite sum or a lazily expanded root."""

    __slots__ = ("terms", "branch", "gap")

    def __init__(self, terms=(), branch: Optional[RealBranch] = None, gap=None):
        self.terms = tuple(terms) if branch is None else None
        self.branch = branch
        # for arcs picked generically: (height, prefix terms, lower, upper) of the gap
        self.gap = gap

    @classmethod
    def of_branch(cls, branch: RealBranch) -> "Series":
        if branch.exact:
            return cls(branch.terms)
        return cls(branch=branch)

    def next_after(self, e) -> Optional[Tuple[Fraction, Coeff]]:
        if self.branch is not None:
            return self.branch.next_term_after(e)
        for ex, c in self.terms:
            if e is None or ex > e:
                return (ex, c)
        return None

    def coefficient(self, e: Fraction) -> Coeff:
        if self.branch is not None:
            return self.branch.coefficient(e)
        for ex, c in self.terms:
            if ex == e:
                return c
        return Fraction(0)

    def below(self, h: Fraction) -> Tuple[Tuple[Fraction, Coeff], ...]:
        if self.branch is not None:
            self.branch.ensure(h)
            return tuple((e, c) for e, c in self.branch.terms if e < h)
        return tuple((e, c) for e, c in self.terms if e < h)

    def last_exponent(self) -> ExtRat:
        """Exponent of the last term of an exact series (inf for lazy roots)."""
        if self.branch is not None:
            return INFINITY
        return self.terms[-1][0] if self.terms else Fraction(0)

    def to_arc(self, frame: Frame) -> PuiseuxArc:
        if self.branch is not None:
            return arc_from_branch(self.branch, frame.chart, frame.sector)
        return PuiseuxArc(frame.chart, self.terms, INFINITY, frame.sector)

    def __repr__(self):
        if self.branch is not None:
            return f"Series(root {[(str(e), str(c)) for e, c in self.branch.terms]}...)"
        return f"Series({[(str(e), str(c)) for e, c in self.terms]})"


def first_difference(a: Series, b: Series):
    """(e, ca, cb) at the first exponent where the series differ, or (inf, None, None)."""
    if a is b or (a.branch is not None and a.branch is b.branch):
        return INFINITY, None, None
    e = None
    while True:
        na, nb = a.next_after(e), b.next_after(e)
        if na is None and nb is None:
            return INFINITY, None, None
        cand = [t[0] for t in (na, nb) if t is not None]
        ex = min(cand)
        ca = na[1] if na is not None and na[0] == ex else Fraction(0)
        cb = nb[1] if nb is not None and nb[0] == ex else Fraction(0)
        if not nf.coeff_eq(ca, cb):
            return ex, ca, cb
        e = ex


def contact(a: Series, b: Series) -> ExtRat:
    return first_difference(a, b)[0]


def lex_compare(a: Series, b: Series) -> int:
    e, ca, cb = first_difference(a, b)
    if e is INFINITY:
        return 0
    return nf.compare(ca, cb)


@dataclass
class RootObject:
    """A real root (kappa = inf) or a non-real group (finite kappa) of one function."""

    series: Series
    kappa: ExtRat
    weight: int

    def contact(self, s: Series) -> ExtRat:
        c = contact(s, self.series)
        if self.kappa is INFINITY:
            return c
        return self.kappa if c is INFINITY or c > self.kappa else c


class FunctionModel:
    """Order and sign of one function along arcs of one frame."""

    def __init__(self, f: Polynomial, frame: Frame):
        self.f = f
        self.frame = frame
        self.zero = f.is_zero()
        self.base_order = Fraction(0)
        self.base_sign = 1
        self.objects: List[RootObject] = []
        if self.zero:
            self.base_sign = 0
            return
        g = frame.local(f)
        const, factors = irreducible_factors(g)
        self.base_sign = 1 if const > 0 else -1
        for factor, mult in factors:
            system = cached_root_system(factor)
            self.base_order += mult * system.lead_order
            if system.lead_sign < 0 and mult % 2:
                self.base_sign = -self.base_sign
            for branch in system.real:
                self.objects.append(RootObject(Series.of_branch(branch), INFINITY,
                                               mult * branch.multiplicity))
            for cl in system.clusters:
                self.objects.append(RootObject(Series(cl.prefix), cl.kappa, mult * cl.weight))

    def real_roots(self) -> List[Series]:
        return [o.series for o in self.objects if o.kappa is INFINITY]

    def order(self, s: Series) -> ExtRat:
        if self.zero:
            return INFINITY
        total: ExtRat = self.base_order
        for obj in self.objects:
            c = obj.contact(s)
            if c is INFINITY:
                return INFINITY
            total += obj.weight * c
        return total

    def sign(self, s: Series) -> int:
        if self.zero:
            return 0
        sgn = self.base_sign
        for obj in self.objects:
            if obj.kappa is not INFINITY:
                continue  # conjugate pairs contribute a positive factor
            e, cs, co = first_difference(s, obj.series)
            if e is INFINITY:
                return 0
            if obj.weight % 2 and nf.compare(cs, co) < 0:
                sgn = -sgn
        return sgn

    def rate(self, s: Series, depth: ExtRat) -> int:
        """Growth of the order per unit depth when leaving ``s`` just above ``depth``."""
        if self.zero:
            return 0
        return sum(obj.weight for obj in self.objects if obj.contact(s) > depth)


# ---------------------------------------------------------------------------
# choosing coefficients in gaps


def simplest_between(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    """Rational of least height strictly between lo and hi (None = unbounded)."""
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(0) if hi > 0 else Fraction(math.ceil(hi) - 1)
    if hi is None:
        return Fraction(0) if lo < 0 else Fraction(math.floor(lo) + 1)
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    return _stern_brocot(lo, hi)


def _stern_brocot(lo: Fraction, hi: Fraction) -> Fraction:
    """Simplest rational in the open interval (lo, hi), 0 <= lo < hi."""
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    if lo == fl:
        return fl + Fraction(1, math.floor(1 / (hi - fl)) + 1)
    return fl + 1 / _stern_brocot(1 / (hi - fl), 1 / (lo - fl))


Chooser = Callable[[Optional[Coeff], Optional[Coeff]], Fraction]


def _rational_bounds(lo: Optional[Coeff], hi: Optional[Coeff]):
    """Rational lo' >= lo and hi' <= hi with lo' < hi' (refining algebraic ends)."""
    while True:
        rl = None if lo is None else nf.interval(lo)[1]
        rh = None if hi is None else nf.interval(hi)[0]
        if rl is None or rh is None or rl < rh:
            return rl, rh
        for v in (lo, hi):
            if isinstance(v, nf.Alg):
                v.field.refine()


def default_chooser(lo: Optional[Coeff], hi: Optional[Coeff]) -> Fraction:
    rl, rh = _rational_bounds(lo, hi)
    c = simplest_between(rl, rh)
    # an algebraic end could coincide with the pick only if it were rational
    return c


def random_chooser(rng) -> Chooser:
    """Pick a random rational in the gap (reproducible from ``rng``)."""

    def choose(lo, hi):
        rl, rh = _rational_bounds(lo, hi)
        if rl is None and rh is None:
            return Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        if rl is None:
            return rh - Fraction(rng.randint(1, 40), rng.randint(1, 9))
        if rh is None:
            return rl + Fraction(rng.randint(1, 40), rng.randint(1, 9))
        t = Fraction(rng.randint(1, 97), 98)
        return rl + (rh - rl) * t

    return choose


# ---------------------------------------------------------------------------
# the triangle and its fine decomposition


@dataclass
class Column:
    Q: Segment
    mu: AffineMap
    sign: int


@dataclass
class FineSlice:
    left: Series
    right: Series
    beta: Fraction
    columns: List[Column]
    support: str  # "left" | "right" | "none"


class Triangle:
    """Hölder triangle between ``left`` < ``right`` in a frame, with functions."""

    def __init__(self, frame: Frame, left: Series, right: Series, functions: Sequence[Polynomial]):
        self.frame = frame
        self.left = left
        self.right = right
        self.models = [FunctionModel(f, frame) for f in functions]
        if lex_compare(left, right) >= 0:
            raise ValueError("triangle boundaries must be ordered left < right")

    def points(self) -> List[Tuple[Series, ExtRat]]:
        pts: List[Tuple[Series, ExtRat]] = [(self.left, INFINITY), (self.right, INFINITY)]
        for m in self.models:
            for obj in m.objects:
                pts.append((obj.series, obj.kappa))
        return pts

    def vertices(self) -> List[Tuple[Fraction, Series]]:
        """Distinct (height, representative) pairs of the contact tree."""
        pts = self.points()
        raw: List[Tuple[Fraction, Series]] = []
        for i, (p, kp) in enumerate(pts):
            if kp is not INFINITY:
                raw.append((kp, p))
            for q, kq in pts[i + 1:]:
                c = contact(p, q)
                c = min(x for x in (c, kp, kq) if x is not INFINITY) if any(
                    x is not INFINITY for x in (c, kp, kq)) else INFINITY
                if c is not INFINITY:
                    raw.append((c, p))
        out: List[Tuple[Fraction, Series]] = []
        for h, p in raw:
            if any(h == h2 and _agree_below(p, p2, h) for h2, p2 in out):
                continue
            out.append((h, p))
        return out

    def specials(self, h: Fraction, p: Series) -> List[Coeff]:
        vals: List[Coeff] = []
        for q, kq in self.points():
            if kq is not INFINITY and kq <= h:
                continue
            if not _agree_below(p, q, h):
                continue
            c = q.coefficient(h)
            if not any(nf.coeff_eq(c, v) for v in vals):
                vals.append(c)
        vals.sort(key=cmp_to_key(nf.compare))
        return vals

    def inside(self, s: Series) -> bool:
        return lex_compare(self.left, s) <= 0 <= lex_compare(self.right, s)

    def fine_arcs(self, chooser: Chooser = default_chooser) -> List[Series]:
        arcs: List[Series] = [self.left, self.right]
        for h, p in self.vertices():
            base = p.below(h)
            specials = self.specials(h, p)
            bounds = [None] + specials + [None]
            for lo, hi in zip(bounds, bounds[1:]):
                c = chooser(lo, hi)
                cand = Series(base + (((h, c),) if c != 0 else ()), gap=(h, base, lo, hi))
                if self.inside(cand) and not _contains(arcs, cand):
                    arcs.append(cand)
        for m in self.models:
            for r in m.real_roots():
                if self.inside(r) and not _contains(arcs, r):
                    arcs.append(r)
        arcs.sort(key=cmp_to_key(lex_compare))
        return arcs

    def fine_slices(self, chooser: Chooser = default_chooser) -> List[FineSlice]:
        arcs = self.fine_arcs(chooser)
        return [self.slice_between(a, b) for a, b in zip(arcs, arcs[1:])]

    def slice_between(self, a: Series, b: Series) -> FineSlice:
        beta = contact(a, b)
        if beta is INFINITY:
            raise InternalValidationFailure("degenerate slice with identical boundary arcs")
        cols: List[Column] = []
        support = "none"
        for m in self.models:
            qa, qb = m.order(a), m.order(b)
            seg = Segment(qa, qb)
            if qa == qb:
                probe = _probe(a, b, beta, None)
                cols.append(Column(seg, AffineMap.constant(beta), m.sign(probe)))
                continue
            side = "left" if qa > qb else "right"
            if support not in ("none", side):
                raise InternalValidationFailure("fine slice with conflicting supports")
            support = side
            near, far = (a, b) if side == "left" else (b, a)
            q_far = m.order(far)
            k = m.rate(near, beta)
            if k <= 0:
                raise InternalValidationFailure("order changes across a slice with zero rate")
            mu = AffineMap(Fraction(1, k), beta - q_far / k)
            depth = self._next_depth(near, beta)
            q_near = m.order(near)
            predicted = INFINITY if depth is INFINITY else q_far + k * (depth - beta)
            if predicted != q_near:
                raise InternalValidationFailure(
                    f"width certification failed: predicted {predicted}, got {q_near}")
            probe = _probe(near, far, beta, depth)
            s_probe = _probe_depth(beta, depth)
            if m.order(probe) != q_far + k * (s_probe - beta):
                raise InternalValidationFailure("interior order sample is off the affine width")
            cols.append(Column(seg, mu, m.sign(probe)))
        return FineSlice(a, b, beta, cols, support)

    def _next_depth(self, s: Series, beta: Fraction) -> ExtRat:
        best: ExtRat = INFINITY
        for q, kq in self.points():
            c = contact(s, q)
            if kq is not INFINITY and (c is INFINITY or c > kq):
                c = kq
            if c is not INFINITY and c > beta and (best is INFINITY or c < best):
                best = c
        return best


def _probe_depth(beta: Fraction, depth: ExtRat) -> Fraction:
    return beta + 1 if depth is INFINITY else (beta + depth) / 2


def _probe(near: Series, far: Series, beta: Fraction, depth: Optional[ExtRat]) -> Series:
    """An interior arc leaving ``near`` toward ``far`` strictly between beta and depth."""
    s = _probe_depth(beta, INFINITY if depth is None else depth)
    base = near.below(s)
    toward = -1 if lex_compare(far, near) < 0 else 1
    return Series(base + ((s, nf.add(near.coefficient(s), Fraction(toward))),))


def _agree_below(p: Series, q: Series, h: Fraction) -> bool:
    c = contact(p, q)
    return c is INFINITY or c >= h


def _contains(arcs: List[Series], s: Series) -> bool:
    return any(contact(a, s) is INFINITY for a in arcs)
