"""Numerical cross-check of orders, contacts and signs by sampling arcs.

Everything here is floating point (mpmath, high precision).  Nothing in the
exact core ever reads these numbers; they only confirm or refute it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import mpmath

from .decomposition import LEFT, NONE, RIGHT, Position, lateral_key
from .domain import layout
from .errors import MultipizzaError
from .puiseux import numberfield as nf
from .puiseux.arcs import X_OF_Y, PuiseuxArc, local_polynomial
from .puiseux.numberfield import Alg, NumberField
from .puiseux.polynomial import Polynomial
from .scalars import INFINITY, Segment, affine_eval
from .zones import express_in, position_of

DIVERGED = "DIVERGED"
UNDERFLOW = mpmath.mpf("1e-200")
WORKING_DIGITS = 330
RESIDUAL_LIMIT = 1e-3


@dataclass(frozen=True)
class SamplePlan:
    """Parameter values at which arcs are sampled, and the accepted slope error."""

    t_values: tuple = field(default_factory=lambda: geometric_grid())
    tolerance: float = 0.05

    def __post_init__(self):
        ts = tuple(mpmath.mpf(t) for t in self.t_values)
        if len(ts) < 8:
            raise ValueError("a sample plan needs at least 8 points")
        if any(t <= 0 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
            raise ValueError("sample points must be positive and strictly decreasing")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "t_values", ts)


def geometric_grid(n: int = 16, start: str = "1e-3", stop: str = "1e-9") -> tuple:
    with mpmath.workdps(WORKING_DIGITS):
        a, b = mpmath.log(mpmath.mpf(start)), mpmath.log(mpmath.mpf(stop))
        return tuple(mpmath.exp(a + (b - a) * k / (n - 1)) for k in range(n))


# -- numeric values of exact data -------------------------------------------

_generators: Dict[tuple, mpmath.mpf] = {}


def _generator(K: NumberField):
    key = (K.key(), WORKING_DIGITS)
    if key not in _generators:
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in K.minpoly]

        def p(z):
            return mpmath.polyval(coeffs[::-1], z)

        lo = mpmath.mpf(K.lo.numerator) / K.lo.denominator
        hi = mpmath.mpf(K.hi.numerator) / K.hi.denominator
        _generators[key] = mpmath.findroot(p, (lo, hi), solver="anderson")
    return _generators[key]


def coefficient_value(c):
    if isinstance(c, Alg):
        theta = _generator(c.field)
        return sum((_rat(a) * theta ** k for k, a in enumerate(c.coeffs)), mpmath.mpf(0))
    return _rat(Fraction(c))


def _rat(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _power(t, e: Fraction):
    if e.denominator == 1:
        return t ** int(e)
    return mpmath.root(t, e.denominator) ** e.numerator


def evaluate(f: Polynomial, x, y):
    return sum((_rat(c) * x ** i * y ** j for (i, j), c in f.terms.items()), mpmath.mpf(0))


def dependent_value(arc: PuiseuxArc, t):
    """phi(t) for the arc; lazily expanded roots are polished onto the true root."""
    v = sum((coefficient_value(c) * _power(t, e) for e, c in arc.terms), mpmath.mpf(0))
    origin = getattr(arc.source, "origin", None)
    if origin is None or arc.trunc is INFINITY:
        return v
    by_j = origin.y_coefficients()
    poly = [sum((_rat(a) * t ** i for i, a in by_j.get(j, {}).items()), mpmath.mpf(0))
            for j in range(max(by_j) + 1)]

    def g(z):
        return mpmath.polyval(poly[::-1], z)

    try:
        return mpmath.findroot(g, v, tol=mpmath.mpf(10) ** (-WORKING_DIGITS + 20))
    except (ValueError, ZeroDivisionError):
        return v


def point_of(arc: PuiseuxArc, t):
    """The point of the plane reached by the arc at parameter t."""
    sx, sy = arc.sector
    v = dependent_value(arc, t)
    if arc.chart == X_OF_Y:
        return sx * v, sy * t
    return sx * t, sy * v


def value_along(f: Polynomial, arc: PuiseuxArc, t):
    g = local_polynomial(f, arc.chart, arc.sector)
    return evaluate(g, t, dependent_value(arc, t))


# -- regression ----------------------------------------------------------------

def _fit(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    resid = max(abs(y - my - slope * (x - mx)) for x, y in zip(xs, ys))
    return slope, resid


def _slope(ts, values):
    pts = [(mpmath.log(t), mpmath.log(abs(v))) for t, v in zip(ts, values) if abs(v) >= UNDERFLOW]
    if len(pts) < 3:
        return DIVERGED
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    slope, resid = _fit(xs, ys)
    if resid > RESIDUAL_LIMIT and len(xs) >= 5:
        xs, ys = xs[2:], ys[2:]
        slope, resid = _fit(xs, ys)
        if resid > RESIDUAL_LIMIT:
            slope = _accelerated_tail(xs, ys, slope)
    return float(slope)


def _accelerated_tail(xs, ys, fallback):
    """Aitken extrapolation of the local slopes at the smallest parameters.

    The samples are exact to many digits, so when a correction term t^d
    still bends the curve, the local slopes converge geometrically to the
    exponent and the delta-squared process removes the leading correction.
    """
    local = [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in zip(xs, xs[1:], ys, ys[1:])]
    if len(local) < 3:
        return fallback
    s0, s1, s2 = local[-3:]
    if s1 == s0:
        return s2
    ratio = (s2 - s1) / (s1 - s0)
    if not 0 < ratio < 1:
        return s2
    return s2 + (s2 - s1) * ratio / (1 - ratio)


def estimate_ord(f: Polynomial, arc: PuiseuxArc, plan: SamplePlan = SamplePlan()):
    """Slope of log|f(arc(t))| against log t, or DIVERGED when f vanishes numerically."""
    with mpmath.workdps(WORKING_DIGITS):
        values = [value_along(f, arc, t) for t in plan.t_values]
        return _slope(plan.t_values, values)


def estimate_ord_by_distance(f: Polynomial, arc: PuiseuxArc, plan: SamplePlan = SamplePlan()):
    """Same slope, but against the log of the distance to the origin."""
    with mpmath.workdps(WORKING_DIGITS):
        rs, values = [], []
        for t in plan.t_values:
            x, y = point_of(arc, t)
            rs.append(mpmath.sqrt(x * x + y * y))
            values.append(evaluate(f, x, y))
        return _slope(rs, values)


def estimate_contact(a: PuiseuxArc, b: PuiseuxArc, plan: SamplePlan = SamplePlan()):
    """Slope of log|a(t) - b(t)| for two arcs of the same chart and sector."""
    if (a.chart, a.sector) != (b.chart, b.sector):
        raise ValueError("contact estimates need arcs in the same chart and sector")
    with mpmath.workdps(WORKING_DIGITS):
        values = [dependent_value(a, t) - dependent_value(b, t) for t in plan.t_values]
        return _slope(plan.t_values, values)


def estimate_sign(f: Polynomial, arc: PuiseuxArc, plan: SamplePlan = SamplePlan()) -> int:
    with mpmath.workdps(WORKING_DIGITS):
        v = value_along(f, arc, plan.t_values[-1])
        if abs(v) < UNDERFLOW:
            return 0
        return 1 if v > 0 else -1


def agrees(predicted, estimated, tolerance: float) -> bool:
    if predicted is INFINITY:
        return estimated == DIVERGED
    if estimated == DIVERGED:
        return False
    return abs(float(predicted) - estimated) <= tolerance


# -- pizza verification ------------------------------------------------------------

@dataclass
class Check:
    slice: int
    nu: int
    kind: str
    q: Optional[Fraction]
    predicted: object
    estimated: object
    passed: bool

    def to_json(self):
        def num(v):
            if v is None:
                return None
            if v is INFINITY:
                return "inf"
            if isinstance(v, Fraction):
                return str(v)
            return v

        return {"slice": self.slice, "nu": self.nu, "kind": self.kind, "q": num(self.q),
                "predicted": num(self.predicted), "estimated": num(self.estimated),
                "pass": self.passed}


@dataclass
class VerifyReport:
    checks: List[Check]

    @property
    def exceedances(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.exceedances

    def to_json(self):
        return {"checks": [c.to_json() for c in self.checks],
                "exceedances": len(self.exceedances), "total": len(self.checks)}


def interior_values(Q: Segment, n: int) -> List[Fraction]:
    a, b = Q.a, Q.b
    lo, hi = (a, b) if (b is INFINITY or (a is not INFINITY and a < b)) else (b, a)
    if hi is INFINITY:
        return [lo + Fraction(j, 2) for j in range(1, n + 1)]
    # the middle half keeps the arcs away from the depths of nearby roots,
    # where the leading term only takes over far below the sampled range
    return [lo + (hi - lo) * (Fraction(1, 4) + Fraction(j, 2 * (n + 1))) for j in range(1, n + 1)]


def _inside(key, left: Position, mid: Position, right: Position, cyclic: bool) -> bool:
    kl, km, kr = key(left), key(mid), key(right)
    if kl < kr:
        return kl < km < kr
    return cyclic and (km > kl or km < kr)


def _deviate(arc: PuiseuxArc, depth: Fraction, d: int) -> PuiseuxArc:
    prefix = arc.truncate_below(depth)
    c = nf.add(arc.coefficient(depth), Fraction(d))
    return PuiseuxArc(arc.chart, prefix + ((depth, c),), INFINITY, arc.sector)


def arc_at_contact(L, slice_, anchor: PuiseuxArc, depth: Fraction) -> PuiseuxArc:
    """An arc of the slice interior meeting ``anchor`` with contact exactly ``depth``."""
    key = lateral_key(L)
    left, right = position_of(L, slice_.left_arc), position_of(L, slice_.right_arc)
    frames = [anchor] + [m for p in L.pieces
                         for m in [express_in(anchor, p.frame.chart, p.frame.sector)] if m is not None]
    for base in frames:
        for d in (1, -1):
            cand = _deviate(base, depth, d)
            try:
                pos = position_of(L, cand)
            except MultipizzaError:
                continue
            if _inside(key, left, pos, right, L.spec.cyclic):
                return cand
    raise MultipizzaError(f"no interior arc at contact {depth} found")


def verify_pizza(P, fs: Sequence[Polynomial], plan: SamplePlan = SamplePlan(),
                 samples_per_slice: int = 5) -> VerifyReport:
    """Sample every slice and compare estimated orders and signs with the stored data."""
    if samples_per_slice < 1:
        raise ValueError("samples_per_slice must be positive")
    L = layout(P.domain, list(fs))
    checks: List[Check] = []
    for i, s in enumerate(P.slices):
        anchor = {LEFT: s.left_arc, RIGHT: s.right_arc}.get(s.support, s.left_arc)
        for nu, (f, col) in enumerate(zip(fs, s.columns)):
            for kind, arc, pred in (("boundary", s.left_arc, col.Q.a), ("boundary", s.right_arc, col.Q.b)):
                est = estimate_ord(f, arc, plan)
                checks.append(Check(i, nu, kind, pred, pred, est, agrees(pred, est, plan.tolerance)))
            if col.Q.is_point or s.support == NONE:
                qs = [col.Q.a] * samples_per_slice
                depths = [s.beta + Fraction(j, samples_per_slice + 1) for j in range(1, samples_per_slice + 1)]
            else:
                qs = interior_values(col.Q, samples_per_slice)
                depths = [affine_eval(col.mu, q) for q in qs]
            for q, depth in zip(qs, depths):
                if depth <= s.beta:
                    checks.append(Check(i, nu, "interior", q, q, None, False))
                    continue
                arc = arc_at_contact(L, s, anchor, depth)
                est = estimate_ord(f, arc, plan)
                checks.append(Check(i, nu, "interior", q, q, est, agrees(q, est, plan.tolerance)))
                sg = estimate_sign(f, arc, plan)
                checks.append(Check(i, nu, "sign", q, col.sign, sg, sg == col.sign))
    return VerifyReport(checks)
