"""Zones of arcs: singular arcs and perfect balls, with their orders.

A perfect ball is described by a chart, a finite prefix (the base), an
order h and an allowed region for the coefficient at exponent h.  Its
members are the arcs that agree with the base below h and whose coefficient
at h lies in the region.  The zones of a single function are read off its
minimal pizza: every boundary arc of the minimal pizza is either a singular
arc (a root or a domain boundary) or a generic arc of the contact tree,
whose zone is the gap between the special coefficients around it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, List, Optional, Sequence, Tuple

from .contact import (Chooser, Frame, FunctionModel, Series, contact, default_chooser,
                      first_difference)
from .decomposition import (Position, arc_of, fine_decomposition, lateral_key, merge_all,
                            normalize)
from .domain import DomainKind, DomainSpec, Layout, layout
from .errors import EmptyRegion, MultipizzaError, TruncationTooShallow
from .puiseux import numberfield as nf
from .puiseux.arcs import PuiseuxArc, X_OF_Y, Y_OF_X, coeff_from_json, coeff_to_json
from .puiseux.numberfield import Coeff
from .puiseux.polynomial import Polynomial
from .scalars import INFINITY, ExtRat, format_ext, parse_ext


class ZoneKind(Enum):
    SINGULAR = "singular"
    PERFECT_BALL = "perfect_ball"


Bound = Optional[Coeff]  # None stands for -inf (lower) or +inf (upper)


@dataclass(frozen=True)
class ZoneDescriptor:
    kind: ZoneKind
    base: PuiseuxArc
    order: ExtRat
    region: Tuple[Tuple[Bound, Bound], ...] = ()
    excluded: Tuple[Coeff, ...] = ()

    @property
    def chart(self) -> str:
        return self.base.chart

    @property
    def sector(self) -> Tuple[int, int]:
        return self.base.sector

    @classmethod
    def singular(cls, arc: PuiseuxArc) -> "ZoneDescriptor":
        return cls(ZoneKind.SINGULAR, arc, INFINITY)

    @classmethod
    def ball(cls, chart: str, sector, prefix, order: Fraction, lo: Bound, hi: Bound,
             excluded: Iterable[Coeff] = ()) -> "ZoneDescriptor":
        base = PuiseuxArc(chart, tuple(prefix), order, tuple(sector))
        return cls(ZoneKind.PERFECT_BALL, base, order, ((lo, hi),), tuple(excluded))

    def allows(self, c: Coeff) -> bool:
        if any(nf.coeff_eq(c, x) for x in self.excluded):
            return False
        return any(_in_open(c, lo, hi) for lo, hi in self.region)

    def describe(self) -> str:
        if self.kind is ZoneKind.SINGULAR:
            return f"{{{self.base.describe()}}}"
        regions = " u ".join(f"({_bound_text(lo, '-inf')}, {_bound_text(hi, 'inf')})"
                             for lo, hi in self.region)
        base = PuiseuxArc(self.chart, self.base.terms, INFINITY, self.sector).describe()
        return f"ball(base {base}, order {format_ext(self.order)}, c in {regions})"

    __str__ = describe

    def to_json(self):
        data = {"kind": self.kind.value, "base": self.base.to_json(), "order": format_ext(self.order)}
        if self.kind is ZoneKind.PERFECT_BALL:
            data["region"] = [[_bound_json(lo, "-inf"), _bound_json(hi, "inf")] for lo, hi in self.region]
            data["excluded"] = [coeff_to_json(c) for c in self.excluded]
        return data

    @classmethod
    def from_json(cls, data) -> "ZoneDescriptor":
        kind = ZoneKind(data["kind"])
        base = PuiseuxArc.from_json(data["base"])
        if kind is ZoneKind.SINGULAR:
            return cls.singular(base)
        region = tuple((_bound_from_json(lo), _bound_from_json(hi)) for lo, hi in data["region"])
        excluded = tuple(coeff_from_json(c) for c in data.get("excluded", []))
        return cls(kind, base, parse_ext(data["order"]), region, excluded)


def _bound_text(b: Bound, inf: str) -> str:
    if b is None:
        return inf
    return format_ext(b) if isinstance(b, Fraction) else f"[{float(nf.approx(b)):.6g}]"


def _bound_json(b: Bound, inf: str):
    return inf if b is None else coeff_to_json(b)


def _bound_from_json(b):
    return None if b in ("inf", "-inf") else coeff_from_json(b)


def _in_open(c: Coeff, lo: Bound, hi: Bound) -> bool:
    return (lo is None or nf.compare(lo, c) < 0) and (hi is None or nf.compare(c, hi) < 0)


# ---------------------------------------------------------------------------
# moving arcs between charts


def _signed(arc: PuiseuxArc):
    dep = arc.sector[1] if arc.chart == Y_OF_X else arc.sector[0]
    indep = arc.sector[0] if arc.chart == Y_OF_X else arc.sector[1]
    return indep, dep


def express_in(arc: PuiseuxArc, chart: str, sector) -> Optional[PuiseuxArc]:
    """The same arc in another chart/sector, or None if it does not fit there.

    Within one chart the independent sign must agree and only the dependent
    sign may flip.  Across charts only straight lines ``c*t`` with c != 0
    are translated (enough for transversal zones of order 1).
    """
    target = PuiseuxArc(chart, (), INFINITY, tuple(sector))
    ti, td = _signed(target)
    ai, ad = _signed(arc)
    if arc.chart == chart:
        if ai != ti:
            return None
        if ad == td:
            return arc
        return PuiseuxArc(chart, tuple((e, nf.neg(c)) for e, c in arc.terms), arc.trunc,
                          tuple(sector))
    if len(arc.terms) != 1 or arc.terms[0][0] != 1 or arc.trunc is not INFINITY:
        return None
    c = arc.terms[0][1]
    # the old dependent coordinate ad*c*t becomes the new independent one
    if nf.sign(c) * ad != ti:
        return None
    new_c = nf.mul(nf.inv(c), Fraction(ai * td * ad * ti))
    return PuiseuxArc(chart, ((Fraction(1), new_c),), INFINITY, tuple(sector))


def _line(chart, sector, c) -> PuiseuxArc:
    return PuiseuxArc(chart, ((Fraction(1), c),) if not nf.is_zero(c) else (), INFINITY, tuple(sector))


def _map_region(Z: ZoneDescriptor, chart: str, sector):
    """Region of a transversal zone rewritten as slopes in another chart/sector."""
    if Z.chart == chart:
        moved = express_in(_line(chart, sector, Fraction(1)), Z.chart, Z.sector)
        if moved is None:
            return ()
        # c -> +-c
        if moved.terms[0][1] > 0:
            return tuple(Z.region)
        return tuple((_negb(hi), _negb(lo)) for lo, hi in Z.region)
    probe = [(sg, express_in(_line(chart, sector, Fraction(sg)), Z.chart, Z.sector)) for sg in (1, -1)]
    out = []
    for sg, moved in probe:
        if moved is None:
            continue
        r0 = moved.terms[0][1]
        for lo, hi in Z.region:
            # r = kappa / c on the half-line sign(c) = sg, kappa = r0 * sg; r has sign sign(r0)
            side = 1 if nf.sign(r0) > 0 else -1
            lo2, hi2 = lo, hi
            if side > 0:
                lo2 = Fraction(0) if lo2 is None or nf.sign(lo2) < 0 else lo2
                if hi2 is not None and nf.sign(hi2) <= 0:
                    continue
            else:
                hi2 = Fraction(0) if hi2 is None or nf.sign(hi2) > 0 else hi2
                if lo2 is not None and nf.sign(lo2) >= 0:
                    continue
            kappa = nf.mul(r0, Fraction(sg))
            ends = [None if x is None else (None if nf.is_zero(x) else nf.mul(kappa, nf.inv(x)))
                    for x in (lo2, hi2)]
            # zero ends map to infinity on the side of sg; infinite ends map to zero
            ends = [Fraction(0) if x is None and y is None else x for x, y in zip(ends, (lo2, hi2))]
            for i, y in enumerate((lo2, hi2)):
                if y is not None and nf.is_zero(y):
                    ends[i] = None
            finite = [e for e in ends if e is not None]
            if len(finite) == 2:
                a, b = sorted(finite, key=cmp_to_key(nf.compare))
            elif len(finite) == 1:
                a, b = (finite[0], None) if sg > 0 else (None, finite[0])
            else:
                a, b = (None, None)
            out.append((a, b))
    return tuple(out)


def _negb(b: Bound) -> Bound:
    return None if b is None else nf.neg(b)


# ---------------------------------------------------------------------------
# operations


def zone_order(Z: ZoneDescriptor) -> ExtRat:
    return INFINITY if Z.kind is ZoneKind.SINGULAR else Z.order


def zone_membership(Z: ZoneDescriptor, arc: PuiseuxArc) -> bool:
    if Z.kind is ZoneKind.SINGULAR:
        from .puiseux.arcs import tord
        other = express_in(arc, Z.chart, Z.sector)
        if other is None:
            return False
        return tord(Z.base, other) is INFINITY
    other = express_in(arc, Z.chart, Z.sector)
    if other is None:
        if arc.chart != Z.chart and Z.order > 1:
            raise TruncationTooShallow("arc must be given in the zone's chart")
        return False
    h = Z.order
    if other.trunc is not INFINITY and other.trunc <= h:
        if other.can_deepen():
            other = other.deepened(h)
        else:
            raise TruncationTooShallow(f"arc known only below {format_ext(other.trunc)}")
    for e, c in Z.base.terms:
        if not nf.coeff_eq(other.coefficient(e), c):
            return False
    for e, _ in other.terms:
        if e >= h:
            break
        if not any(e == e2 for e2, _ in Z.base.terms):
            return False
    return Z.allows(other.coefficient(h))


def intersect_zones(Z1: ZoneDescriptor, Z2: ZoneDescriptor) -> Optional[ZoneDescriptor]:
    """Intersection of two zones (order = max of the orders), or None when empty."""
    if Z1.kind is ZoneKind.SINGULAR:
        return Z1 if _contains_arc(Z2, Z1.base) else None
    if Z2.kind is ZoneKind.SINGULAR:
        return Z2 if _contains_arc(Z1, Z2.base) else None
    b2 = express_in(Z2.base, Z1.chart, Z1.sector)
    if Z1.order == 1 and Z2.order == 1 and not Z1.base.terms and not Z2.base.terms:
        return _intersect_directions(Z1, Z2)
    if b2 is None:
        return None
    if Z1.order < Z2.order:
        low, high, high_base = Z1, Z2, b2
    elif Z2.order < Z1.order:
        low, high, high_base = Z2, Z1, Z1.base
        b1 = express_in(Z1.base, Z2.chart, Z2.sector)
        if b1 is None:
            return None
        high_base = b1
    else:
        if not _same_prefix(Z1.base, b2, Z1.order):
            return None
        return _intersect_regions(Z1, Z2.region, Z2.excluded)
    h = low.order
    if not _same_prefix(low.base, high_base, h):
        return None
    if not low.allows(high_base.coefficient(h)):
        return None
    return high


def _contains_arc(Z: ZoneDescriptor, arc: PuiseuxArc) -> bool:
    try:
        return zone_membership(Z, arc)
    except TruncationTooShallow:
        return False


def _same_prefix(a: PuiseuxArc, b: PuiseuxArc, h: Fraction) -> bool:
    ta = [(e, c) for e, c in a.terms if e < h]
    tb = [(e, c) for e, c in b.terms if e < h]
    return len(ta) == len(tb) and all(e1 == e2 and nf.coeff_eq(c1, c2)
                                      for (e1, c1), (e2, c2) in zip(ta, tb))


def _intersect_regions(Z: ZoneDescriptor, region, excluded) -> Optional[ZoneDescriptor]:
    out = []
    for lo1, hi1 in Z.region:
        for lo2, hi2 in region:
            lo = lo1 if lo2 is None or (lo1 is not None and nf.compare(lo1, lo2) >= 0) else lo2
            hi = hi1 if hi2 is None or (hi1 is not None and nf.compare(hi1, hi2) <= 0) else hi2
            if lo is None or hi is None or nf.compare(lo, hi) < 0:
                out.append((lo, hi))
    if not out:
        return None
    excl = list(Z.excluded)
    for c in excluded:
        if not any(nf.coeff_eq(c, x) for x in excl):
            excl.append(c)
    return ZoneDescriptor(ZoneKind.PERFECT_BALL, Z.base, Z.order, tuple(out), tuple(excl))


def _intersect_directions(Z1: ZoneDescriptor, Z2: ZoneDescriptor) -> Optional[ZoneDescriptor]:
    """Two transversal zones, possibly in different charts: map Z2's region into Z1's chart."""
    if (Z1.chart, tuple(Z1.sector)) == (Z2.chart, tuple(Z2.sector)):
        return _intersect_regions(Z1, Z2.region, Z2.excluded)
    region = _map_region(Z2, Z1.chart, Z1.sector)
    if not region:
        return None
    return _intersect_regions(Z1, region, ())


def representative_arc(Z: ZoneDescriptor, avoid: Iterable[Coeff] = (),
                       chooser: Chooser = default_chooser) -> PuiseuxArc:
    """A member arc; for balls the coefficient at the zone order comes from ``chooser``."""
    if Z.kind is ZoneKind.SINGULAR:
        return Z.base
    avoid = list(avoid) + list(Z.excluded)
    gaps = []
    for lo, hi in Z.region:
        cuts = sorted([a for a in avoid if _in_open(a, lo, hi)], key=cmp_to_key(nf.compare))
        bounds = [lo] + cuts + [hi]
        gaps.extend(zip(bounds, bounds[1:]))
    gaps = [(lo, hi) for lo, hi in gaps if lo is None or hi is None or nf.compare(lo, hi) < 0]
    if not gaps:
        raise EmptyRegion("no admissible coefficient in the zone region")
    picks = [chooser(lo, hi) for lo, hi in gaps]
    if chooser is default_chooser:
        c = min(picks, key=lambda r: (max(abs(r.numerator), r.denominator), r))
    else:
        c = picks[0] if len(picks) == 1 else picks[hash(tuple(picks)) % len(picks)]
    terms = list(Z.base.terms)
    if c != 0:
        terms.append((Z.order, c))
    return PuiseuxArc(Z.chart, tuple(terms), INFINITY, Z.sector)


# ---------------------------------------------------------------------------
# zones from the contact structure


def _domain_points(L: Layout, frame: Frame, fs: Sequence[Polynomial]) -> List[Tuple[Series, ExtRat]]:
    pts: List[Tuple[Series, ExtRat]] = []
    for f in fs:
        for obj in FunctionModel(f, frame).objects:
            pts.append((obj.series, obj.kappa))
    if not L.cyclic:
        first, last = L.pieces[0], L.pieces[-1]
        for piece, s in ((first, first.start), (last, last.end)):
            if piece.frame == frame:
                pts.append((s, INFINITY))
    return pts


def zone_of_series(L: Layout, frame: Frame, s: Series, fs: Sequence[Polynomial]) -> ZoneDescriptor:
    """The zone of arcs sharing every contact of ``s`` with the roots and the domain boundary."""
    pts = _domain_points(L, frame, fs)
    h: Fraction = Fraction(1)
    for p, kp in pts:
        c = contact(s, p)
        if kp is not INFINITY and (c is INFINITY or c > kp):
            c = kp
        if c is INFINITY:
            if kp is INFINITY:
                return ZoneDescriptor.singular(s.to_arc(frame))
            continue
        if c > h:
            h = c
    prefix = s.below(h)
    specials = []
    for p, kp in pts:
        if kp is not INFINITY and kp <= h:
            continue
        c = contact(s, p)
        if c is not INFINITY and c < h:
            continue
        specials.append(p.coefficient(h))
    own = s.coefficient(h)
    lo = hi = None
    for v in specials:
        if nf.compare(v, own) < 0 and (lo is None or nf.compare(v, lo) > 0):
            lo = v
        elif nf.compare(v, own) > 0 and (hi is None or nf.compare(v, hi) < 0):
            hi = v
    return ZoneDescriptor.ball(frame.chart, frame.sector, prefix, h, lo, hi)


def minimal_cuts(L: Layout, fs: Sequence[Polynomial], chooser: Chooser = default_chooser) -> List[Position]:
    slices = merge_all(fine_decomposition(L, fs, chooser), L.cyclic)
    if L.cyclic:
        return [s.left for s in slices]
    return [slices[0].left] + [s.right for s in slices]


def zones_at(L: Layout, cuts: Sequence[Position], fs: Sequence[Polynomial]) -> List[ZoneDescriptor]:
    out = []
    for i, pos in enumerate(cuts):
        frame = L.pieces[pos.piece].frame
        if not L.cyclic and i in (0, len(cuts) - 1):
            out.append(ZoneDescriptor.singular(arc_of(L, pos)))
        else:
            out.append(zone_of_series(L, frame, pos.series, fs))
    return out


def perfect_zones(f: Polynomial, domain: DomainSpec) -> List[ZoneDescriptor]:
    """Zones of the boundary arcs of the minimal pizza of ``f``, in lateral order."""
    L = layout(domain, [f])
    return zones_at(L, minimal_cuts(L, [f]), [f])


def position_of(L: Layout, arc: PuiseuxArc) -> Position:
    """Locate an arc of the domain in the piece whose frame can express it."""
    for i, piece in enumerate(L.pieces):
        moved = express_in(arc, piece.frame.chart, piece.frame.sector)
        if moved is None:
            continue
        s = Series(moved.terms) if moved.source is None else Series.of_branch(moved.source)
        if piece.contains(s):
            return normalize(L, Position(i, s))
    raise MultipizzaError(f"arc {arc} is not inside the domain")
