"""Arcs as truncated Puiseux graphs, and orders of functions along them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import MultipizzaError, TruncationTooShallow, UndecidedCoefficientEquality
from ..scalars import INFINITY, ExtRat, ext, format_ext, parse_ext
from . import numberfield as nf
from .numberfield import Alg, Coeff, NumberField
from .polynomial import Polynomial

Y_OF_X = "y_of_x"
X_OF_Y = "x_of_y"
Terms = Tuple[Tuple[Fraction, Coeff], ...]


@dataclass(frozen=True, eq=False)
class PuiseuxArc:
    """The arc t -> (t, phi(t)) (chart y_of_x) or (phi(t), t) (chart x_of_y).

    ``sector`` = (sx, sy) flips the signs of the two coordinates, so the arc
    (sx*t, sy*phi(t)) lives in the quadrant given by the signs.  ``trunc`` is
    the exponent from which on the series is unknown (inf for exact arcs).
    ``source`` optionally points at a lazily expanded root so that a shallow
    truncation can be deepened on demand.
    """

    chart: str
    terms: Terms
    trunc: ExtRat = INFINITY
    sector: Tuple[int, int] = (1, 1)
    source: object = None

    def __post_init__(self):
        clean = []
        last = None
        for e, c in self.terms:
            e = Fraction(e)
            if not isinstance(c, Alg):
                c = Fraction(c)
            if nf.is_zero(c):
                continue
            if last is not None and e <= last:
                raise ValueError("arc exponents must be strictly increasing")
            last = e
            clean.append((e, c))
        object.__setattr__(self, "terms", tuple(clean))
        object.__setattr__(self, "trunc", ext(self.trunc))
        if self.chart not in (Y_OF_X, X_OF_Y):
            raise ValueError(f"unknown chart {self.chart!r}")
        if clean and clean[0][0] < 1:
            raise ValueError("arc exponents must be >= 1")
        if last is not None and self.trunc is not INFINITY and last >= self.trunc:
            raise ValueError("truncation must exceed the last stored exponent")

    # -- lazy deepening ----------------------------------------------------
    def deepened(self, exponent: ExtRat) -> "PuiseuxArc":
        """A copy whose truncation exceeds ``exponent`` (if a source exists)."""
        if self.trunc is INFINITY or (exponent is not INFINITY and self.trunc > exponent):
            return self
        if self.source is None:
            raise TruncationTooShallow(f"arc truncated at {self.trunc}, need beyond {exponent}")
        self.source.ensure(exponent)
        return arc_from_branch(self.source, self.chart, self.sector)

    def can_deepen(self) -> bool:
        return self.trunc is not INFINITY and self.source is not None

    def coefficient(self, exponent: Fraction) -> Coeff:
        if self.trunc is not INFINITY and exponent >= self.trunc:
            return self.deepened(exponent).coefficient(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return Fraction(0)

    def field(self) -> Optional[NumberField]:
        return nf.field_of(*(c for _, c in self.terms))

    def leading(self) -> Optional[Tuple[Fraction, Coeff]]:
        return self.terms[0] if self.terms else None

    def truncate_below(self, exponent: Fraction) -> Terms:
        arc = self.deepened(exponent) if self.trunc is not INFINITY and self.trunc <= exponent else self
        return tuple((e, c) for e, c in arc.terms if e < exponent)

    def with_terms(self, terms, trunc=INFINITY) -> "PuiseuxArc":
        return PuiseuxArc(self.chart, tuple(terms), trunc, self.sector)

    def physical_key(self):
        return (self.chart, self.sector)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxArc):
            return NotImplemented
        if self.physical_key() != other.physical_key() or self.trunc != other.trunc:
            return False
        if len(self.terms) != len(other.terms):
            return False
        return all(e1 == e2 and nf.coeff_eq(c1, c2)
                   for (e1, c1), (e2, c2) in zip(self.terms, other.terms))

    def __hash__(self):
        return hash((self.chart, self.sector, tuple(e for e, _ in self.terms)))

    def describe(self) -> str:
        body = _series_text(self.terms)
        if self.trunc is not INFINITY:
            body += f" + O(t^{format_ext(self.trunc)})"
        sx, sy = self.sector
        dep = body if sy > 0 or body == "0" else f"-({body})"
        indep = "-t" if (sx if self.chart == Y_OF_X else sy) < 0 else "t"
        if self.chart == Y_OF_X:
            return f"({indep}, {dep})"
        dep = body if sx > 0 or body == "0" else f"-({body})"
        return f"({dep}, {indep})"

    __str__ = describe

    def to_json(self):
        return {
            "chart": self.chart,
            "terms": [[format_ext(e), coeff_to_json(c)] for e, c in self.terms],
            "trunc": format_ext(self.trunc),
            "sector": list(self.sector),
        }

    @classmethod
    def from_json(cls, data) -> "PuiseuxArc":
        terms = tuple((Fraction(e), coeff_from_json(c)) for e, c in data.get("terms", []))
        sector = tuple(data.get("sector", (1, 1)))
        return cls(data.get("chart", Y_OF_X), terms, parse_ext(str(data.get("trunc", "inf"))), sector)


def _series_text(terms) -> str:
    if not terms:
        return "0"
    parts = []
    for e, c in terms:
        mono = "t" if e == 1 else f"t^{format_ext(e)}"
        text = _coeff_text(c)
        parts.append(mono if text == "1" else f"-{mono}" if text == "-1" else f"{text}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _coeff_text(c: Coeff) -> str:
    if isinstance(c, Alg):
        return f"[{float(nf.approx(c)):.6g}]"
    return format_ext(c)


def coeff_to_json(c: Coeff):
    """Rationals as "p/q"; algebraic numbers as {"minpoly": [...], "interval": [lo, hi]}."""
    if not isinstance(c, Alg):
        return format_ext(Fraction(c))
    poly = nf._defining_poly(c)
    import sympy

    _, factors = poly.factor_list()
    for fac, _ in factors:
        lo, hi = nf.interval(c)
        while True:
            cnt = nf._count_roots(fac, lo, hi)
            if cnt == 1 and _isolates(poly, lo, hi):
                break
            c.field.refine()
            lo, hi = nf.interval(c)
        if nf._count_roots(fac, lo, hi) == 1:
            coeffs = [nf._to_fraction(a) for a in fac.all_coeffs()]
            lead = coeffs[0]
            return {
                "minpoly": [format_ext(a / lead) for a in coeffs],
                "interval": [format_ext(lo), format_ext(hi)],
            }
    raise MultipizzaError("could not serialize algebraic coefficient")


def _isolates(poly, lo, hi) -> bool:
    return nf._count_roots(poly, lo, hi) == 1


def coeff_from_json(data) -> Coeff:
    if isinstance(data, (str, int)):
        return Fraction(str(data))
    coeffs = [Fraction(a) for a in data["minpoly"]]  # high to low
    lo, hi = (Fraction(a) for a in data["interval"])
    low_to_high = list(reversed(coeffs))
    roots, _ = nf.real_roots(low_to_high)
    matches = []
    for value, _ in roots:
        a, b = nf.interval(value)
        while not (b < lo or a > hi) and not (lo <= a and b <= hi):
            if not isinstance(value, Alg):
                break
            value.field.refine()
            a, b = nf.interval(value)
        if lo <= a and b <= hi:
            matches.append(value)
    if len(matches) != 1:
        raise MultipizzaError("algebraic coefficient interval does not isolate a single root")
    return matches[0]


def arc_from_branch(branch, chart: str = Y_OF_X, sector=(1, 1)) -> PuiseuxArc:
    terms, known = branch.truncation()
    return PuiseuxArc(chart, terms, known, tuple(sector), source=None if branch.exact else branch)


# ---------------------------------------------------------------------------
# series arithmetic: dict exponent -> coeff, everything below ``bound`` kept


Series = Dict[Fraction, Coeff]


def series_mul(a: Series, b: Series, bound: ExtRat) -> Series:
    out: Series = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            if bound is not INFINITY and e >= bound:
                continue
            val = nf.mul(c1, c2)
            cur = out.get(e)
            val = val if cur is None else nf.add(cur, val)
            if nf.is_zero(val):
                out.pop(e, None)
            else:
                out[e] = val
    return out


def local_polynomial(f: Polynomial, chart: str, sector) -> Polynomial:
    """g(u, v) with f(point of the arc) = g(t, phi(t))."""
    sx, sy = sector
    g = f.reflect(sx, sy)
    return g if chart == Y_OF_X else g.swap()


def substitute(g: Polynomial, terms: Sequence[Tuple[Fraction, Coeff]], bound: ExtRat) -> Series:
    """g(t, phi(t)) with all exponents >= bound dropped."""
    phi: Series = {e: c for e, c in terms}
    by_j: Dict[int, Dict[int, Fraction]] = g.y_coefficients()
    result: Series = {}
    power: Series = {Fraction(0): Fraction(1)}
    top = max(by_j) if by_j else 0
    for j in range(top + 1):
        if j > 0:
            power = series_mul(power, phi, bound)
        for i, a in by_j.get(j, {}).items():
            for e, c in power.items():
                ee = e + i
                if bound is not INFINITY and ee >= bound:
                    continue
                val = nf.mul(c, a)
                cur = result.get(ee)
                val = val if cur is None else nf.add(cur, val)
                if nf.is_zero(val):
                    result.pop(ee, None)
                else:
                    result[ee] = val
    return result


def _error_order(g: Polynomial, arc: PuiseuxArc) -> ExtRat:
    """Lower bound for the order of g(t, phi) - g(t, phi_truncated)."""
    if arc.trunc is INFINITY:
        return INFINITY
    lead = arc.terms[0][0] if arc.terms else arc.trunc
    lead = min(lead, arc.trunc)
    best = None
    for (i, j), _ in g.terms.items():
        if j >= 1:
            val = arc.trunc + i + (j - 1) * lead
            best = val if best is None else min(best, val)
    return INFINITY if best is None else best


def ord_and_coefficient(f: Polynomial, arc: PuiseuxArc, max_deepen: int = 24):
    """(ord, leading coefficient) of f along the arc by direct substitution.

    A lazily expanded root arc whose defining factor divides f gives inf.
    """
    g = local_polynomial(f, arc.chart, arc.sector)
    origin = getattr(arc.source, "origin", None)
    if origin is not None and divides(origin, g):
        return INFINITY, None
    current = arc
    for _ in range(max_deepen):
        err = _error_order(g, current)
        series = substitute(g, current.terms, err)
        if series:
            e = min(series)
            return e, series[e]
        if err is INFINITY:
            return INFINITY, None
        if current.source is None:
            raise TruncationTooShallow(
                f"leading term of f along {arc} not determined below t^{format_ext(err)}")
        current = current.deepened(current.trunc)
    raise TruncationTooShallow("order along arc not determined within the deepening budget")


def divides(p: Polynomial, g: Polynomial) -> bool:
    import sympy

    x, y = sympy.symbols("x y")
    _, rem = sympy.div(g.to_sympy(x, y), p.to_sympy(x, y), x, y, domain="QQ")
    return rem == 0


def ord_along(f: Polynomial, arc: PuiseuxArc) -> ExtRat:
    return ord_and_coefficient(f, arc)[0]


def sign_along(f: Polynomial, arc: PuiseuxArc) -> int:
    order, coeff = ord_and_coefficient(f, arc)
    if order is INFINITY:
        return 0
    return nf.sign(coeff)


def tord(a: PuiseuxArc, b: PuiseuxArc, max_deepen: int = 256) -> ExtRat:
    """Order of tangency of two arcs (first exponent where they differ)."""
    indep_a = (a.chart, a.sector[0] if a.chart == Y_OF_X else a.sector[1])
    indep_b = (b.chart, b.sector[0] if b.chart == Y_OF_X else b.sector[1])
    if indep_a != indep_b:
        if _same_direction(a, b):
            raise MultipizzaError("tangent arcs given in different charts; re-express one of them")
        return Fraction(1)
    if a.source is not None and a.source is b.source and a.physical_key() == b.physical_key():
        return INFINITY
    for rounds in range(max_deepen):
        if rounds == 3 and _same_root(a, b):
            return INFINITY
        ta, tb = _signed_terms(a), _signed_terms(b)
        limit = _min_ext(a.trunc, b.trunc)
        exps = sorted({e for e, _ in ta} | {e for e, _ in tb})
        da, db = dict(ta), dict(tb)
        for e in exps:
            if limit is not INFINITY and e >= limit:
                break
            if not nf.coeff_eq(da.get(e, Fraction(0)), db.get(e, Fraction(0))):
                return e
        if limit is INFINITY:
            return INFINITY
        moved = False
        for arc in (a, b):
            if arc.trunc == limit and arc.can_deepen():
                moved = True
        if not moved:
            raise TruncationTooShallow("arcs agree up to their common truncation exponent")
        a = a.deepened(limit) if a.trunc == limit and a.can_deepen() else a
        b = b.deepened(limit) if b.trunc == limit and b.can_deepen() else b
    raise UndecidedCoefficientEquality("tord not determined within the deepening budget")


def _separation_depth(origin: Polynomial) -> ExtRat:
    """Largest mutual contact among the real roots of a squarefree polynomial."""
    from .rootcache import cached_root_system

    branches = cached_root_system(origin).real
    depth: ExtRat = Fraction(0)
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            t = tord(arc_from_branch(branches[i]), arc_from_branch(branches[j]))
            depth = max(depth, t)
    return depth


def _same_root(a: PuiseuxArc, b: PuiseuxArc) -> bool:
    """Decide whether two lazily expanded root arcs are the same root."""
    oa = getattr(a.source, "origin", None)
    ob = getattr(b.source, "origin", None)
    if oa is None or ob is None or a.physical_key() != b.physical_key():
        return False
    if oa != ob:
        import sympy

        x, y = sympy.symbols("x y")
        if sympy.Poly(sympy.gcd(oa.to_sympy(x, y), ob.to_sympy(x, y)), x, y).total_degree() <= 0:
            return False
    depth = max(_separation_depth(oa), _separation_depth(ob))
    a2, b2 = a.deepened(depth), b.deepened(depth)
    ta, tb = dict(_signed_terms(a2)), dict(_signed_terms(b2))
    for e in sorted(set(ta) | set(tb)):
        if e > depth:
            break
        if not nf.coeff_eq(ta.get(e, Fraction(0)), tb.get(e, Fraction(0))):
            return False
    # agreeing past the separation depth of both root sets: both must be the
    # unique root of the common factor with this prefix
    return oa == ob or _common_root_prefix(oa, ob, a2, depth)


def _common_root_prefix(oa, ob, arc, depth) -> bool:
    import sympy

    from .rootcache import cached_root_system

    x, y = sympy.symbols("x y")
    g = Polynomial.from_sympy(sympy.gcd(oa.to_sympy(x, y), ob.to_sympy(x, y)), x, y)
    for branch in cached_root_system(g).real:
        cand = arc_from_branch(branch, arc.chart, (1, 1)).deepened(depth)
        tc = dict(cand.terms)
        ta = dict(_signed_terms(arc))
        if all(nf.coeff_eq(tc.get(e, Fraction(0)), ta.get(e, Fraction(0)))
               for e in sorted(set(tc) | set(ta)) if e <= depth):
            return True
    return False


def _signed_terms(arc: PuiseuxArc):
    """Terms of the dependent coordinate with its actual sign."""
    dep_sign = arc.sector[1] if arc.chart == Y_OF_X else arc.sector[0]
    return [(e, c if dep_sign > 0 else nf.neg(c)) for e, c in arc.terms]


def _min_ext(a: ExtRat, b: ExtRat) -> ExtRat:
    if a is INFINITY:
        return b
    if b is INFINITY:
        return a
    return min(a, b)


def _direction(arc: PuiseuxArc):
    """Unit tangent direction as an exact (dx, dy) pair up to positive scaling."""
    sx, sy = arc.sector
    lead = arc.terms[0] if arc.terms else None
    slope = lead[1] if lead and lead[0] == 1 else Fraction(0)
    if arc.chart == Y_OF_X:
        return (Fraction(sx), nf.mul(Fraction(sy), slope))
    return (nf.mul(Fraction(sx), slope), Fraction(sy))


def _same_direction(a: PuiseuxArc, b: PuiseuxArc) -> bool:
    ax, ay = _direction(a)
    bx, by = _direction(b)
    cross = nf.add(nf.mul(ax, by), nf.neg(nf.mul(ay, bx)))
    if not nf.is_zero(cross) and nf.sign(cross) != 0:
        return False
    dot = nf.add(nf.mul(ax, bx), nf.mul(ay, by))
    return nf.sign(dot) > 0


def puiseux_roots(f: Polynomial, chart: str = Y_OF_X, until_separated: bool = True,
                  sector=(1, 1)) -> List[Tuple[PuiseuxArc, int]]:
    """Real root arcs of f with initial exponent >= 1 inside the sector.

    Repeated factors show up as multiplicities.  With ``until_separated`` all
    returned arcs are expanded one step past their largest mutual contact.
    """
    from .rootcache import squarefree_parts
    from .newton import root_system

    g = local_polynomial(f, chart, sector)
    found = []
    for part, mult in squarefree_parts(g):
        system = root_system(part)
        for branch in system.real:
            if not branch.terms:
                found.append((branch, mult * branch.multiplicity))
                continue
            e0, c0 = branch.terms[0]
            if e0 >= 1 and nf.sign(c0) > 0:
                found.append((branch, mult * branch.multiplicity))
    if until_separated:
        _separate([b for b, _ in found])
    return [(arc_from_branch(b, chart, sector), m) for b, m in found]


def _separate(branches):
    arcs = [arc_from_branch(b) for b in branches]
    deepest: Dict[int, ExtRat] = {}
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            t = tord(arc_from_branch(branches[i]), arc_from_branch(branches[j]))
            for k in (i, j):
                prev = deepest.get(k, Fraction(0))
                deepest[k] = t if t is INFINITY or prev is INFINITY else max(prev, t)
    for k, depth in deepest.items():
        if depth is INFINITY:
            continue
        b = branches[k]
        b.ensure(depth)
        if not b.exact:
            b._step()
