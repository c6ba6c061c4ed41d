"""Pizzas of single functions: construction, validation, minimization.

A pizza is built from the perfect zones of the function: one representative
arc per zone, and between consecutive representatives one slice whose data
(orders at both ends, affine width, sign, supporting side) is read off the
contact structure.  Each such slice is certified elementary by refining it
into the fine decomposition and checking that it merges back into one piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .abstract import (SIGN_TEXT, TEXT_SIGN, AbstractColumn, AbstractMultipizza, AbstractPizza,
                       AbstractSlice, _SIDE_TO_END)
from .contact import Chooser, Column, default_chooser
from .decomposition import (LEFT, NONE, RIGHT, Position, Slice, arc_of, lateral_key, merge_all,
                            mergeable_neighbours, span)
from .domain import DomainSpec, Layout, layout
from .errors import InternalValidationFailure, MultipizzaError
from .puiseux.arcs import PuiseuxArc, tord
from .puiseux.polynomial import Polynomial
from .scalars import INFINITY, AffineMap, Segment, affine_eval, format_ext, parse_ext
from .zones import express_in, perfect_zones, position_of, representative_arc, zones_at, minimal_cuts

PizzaSlice = Slice


@dataclass
class Pizza:
    domain: DomainSpec
    slices: List[Slice]
    functions: Tuple[Polynomial, ...] = ()

    @property
    def cyclic(self) -> bool:
        return self.domain.cyclic

    @property
    def n(self) -> int:
        return len(self.slices[0].columns) if self.slices else len(self.functions)

    def to_json(self):
        return {
            "domain": self.domain.to_json(),
            "functions": [f.to_text() for f in self.functions],
            "slices": [_pizza_slice_json(s) for s in self.slices],
        }

    @classmethod
    def from_json(cls, data) -> "Pizza":
        from .puiseux.polynomial import parse_polynomial
        slices = []
        for s in data["slices"]:
            cols = [Column(Segment.from_json(s["Q"]), AffineMap.from_json(s["mu"]), TEXT_SIGN[s["sign"]])]
            slices.append(Slice(parse_ext(s["beta"]), PuiseuxArc.from_json(s["left_arc"]),
                                PuiseuxArc.from_json(s["right_arc"]), cols, s["support"]))
        fs = tuple(parse_polynomial(t, require_germ=False) for t in data.get("functions", []))
        return cls(DomainSpec.from_json(data["domain"]), slices, fs)


def _pizza_slice_json(s: Slice):
    return {
        "beta": format_ext(s.beta),
        "Q": s.Q.to_json(),
        "mu": s.mu.to_json(),
        "sign": SIGN_TEXT[s.sign],
        "support": s.support,
        "left_arc": s.left.to_json(),
        "right_arc": s.right.to_json(),
    }


# ---------------------------------------------------------------------------
# shared helpers (also used for multipizzas)


def cut_pairs(L: Layout, cuts: Sequence[Position]):
    pairs = list(zip(cuts, cuts[1:]))
    if L.cyclic and len(cuts) > 1:
        pairs.append((cuts[-1], cuts[0]))
    return pairs


def check_lateral(L: Layout, cuts: Sequence[Position]) -> None:
    key = lateral_key(L)
    keys = [key(c) for c in cuts]
    if L.cyclic and len(keys) > 1:
        # one wrap-around is allowed: the cuts may start anywhere on the circle
        keys = keys + keys[:1]
        descents = sum(1 for a, b in zip(keys, keys[1:]) if b < a)
        if any(not a < b and not b < a for a, b in zip(keys, keys[1:])) or descents != 1:
            raise InternalValidationFailure("representative arcs are not in cyclic lateral order")
        return
    for a, b in zip(keys, keys[1:]):
        if not a < b:
            raise InternalValidationFailure("representative arcs are not in lateral order")


def slices_between(L: Layout, fs: Sequence[Polynomial], cuts: Sequence[Position],
                   chooser: Chooser = default_chooser, single: bool = False) -> List[Slice]:
    """Slices between consecutive cuts, each the merged refinement of its span."""
    out: List[Slice] = []
    for p, q in cut_pairs(L, cuts):
        merged = merge_all(span(L, fs, p, q, chooser))
        if single and len(merged) != 1:
            raise InternalValidationFailure(
                f"span between consecutive zone representatives is not elementary ({len(merged)} pieces)")
        out.extend(merged)
    return out


def with_arcs(L: Layout, slices: Sequence[Slice]) -> List[Slice]:
    """Replace positions by arcs; shared boundaries become one arc object."""
    out = []
    for s in slices:
        out.append(Slice(s.beta, arc_of(L, s.left), arc_of(L, s.right), list(s.columns), s.support))
    for a, b in zip(out, out[1:] + (out[:1] if L.cyclic else [])):
        b.left = a.right
    return out


def same_arc(a: PuiseuxArc, b: PuiseuxArc) -> bool:
    if a is b:
        return True
    moved = express_in(b, a.chart, a.sector)
    if moved is None:
        return False
    try:
        return tord(a, moved) is INFINITY
    except MultipizzaError:
        return False


def width_at(mu: AffineMap, q):
    """μ(q), with the limit value at an infinite endpoint."""
    if q is INFINITY and not mu.is_constant:
        if mu.slope > 0:
            return INFINITY
        raise InternalValidationFailure("width with non-positive slope at an infinite end")
    return affine_eval(mu, q)


def _column_report(i: int, nu: Optional[int], c: Column, beta, support: str) -> List[str]:
    tag = f"slice {i}" + ("" if nu is None else f", function {nu}")
    out = []
    if c.sign not in (-1, 0, 1):
        out.append(f"{tag}: sign {c.sign} is not one of +, -, 0")
    if c.Q.is_point:
        if not c.mu.is_constant:
            out.append(f"{tag}: μ is not constant on the point segment {c.Q}")
        elif c.mu.const != beta:
            out.append(f"{tag}: min μ = {c.mu.const} ≠ β = {format_ext(beta)}")
        return out
    if c.mu.is_constant:
        out.append(f"{tag}: μ is constant on the non-point segment {c.Q}")
        return out
    for q in (c.Q.a, c.Q.b):
        if q is INFINITY:
            if c.mu.slope > 1 or (c.mu.slope == 1 and c.mu.intercept > 0):
                out.append(f"μ(q)≤q fails at q=inf ({tag})")
        elif affine_eval(c.mu, q) > q:
            out.append(f"μ(q)≤q fails at q={format_ext(q)} ({tag})")
    va, vb = width_at(c.mu, c.Q.a), width_at(c.mu, c.Q.b)
    low = va if vb is INFINITY or (va is not INFINITY and va <= vb) else vb
    if low != beta:
        out.append(f"{tag}: min μ = {format_ext(low)} ≠ β = {format_ext(beta)}")
    peak = RIGHT if (vb is INFINITY or (va is not INFINITY and vb > va)) else LEFT
    if support != peak:
        out.append(f"{tag}: supporting side {support} but μ is largest at the {peak} end")
    return out


def validate_slices(domain: DomainSpec, slices: Sequence[Slice],
                    functions: Sequence[Polynomial] = (), chooser: Chooser = default_chooser) -> List[str]:
    report: List[str] = []
    n = len(slices)
    if n == 0:
        return ["no slices"]
    multi = len(slices[0].columns) > 1
    for i, s in enumerate(slices):
        if s.beta is INFINITY:
            report.append(f"slice {i}: infinite exponent")
        else:
            try:
                t = tord(s.left, s.right)
                if t != s.beta:
                    report.append(f"slice {i}: β = {format_ext(s.beta)} but tord of its arcs is {format_ext(t)}")
            except MultipizzaError as exc:
                report.append(f"slice {i}: tord of boundary arcs undecided ({exc})")
        moving = [c for c in s.columns if not c.Q.is_point]
        if moving and s.support == NONE:
            report.append(f"slice {i}: non-point segment without a supporting side")
        if not moving and s.support != NONE:
            report.append(f"slice {i}: supporting side {s.support} but all segments are points")
        for nu, c in enumerate(s.columns):
            report.extend(_column_report(i, nu if multi else None, c, s.beta, s.support))
    pairs = [(i, i + 1) for i in range(n - 1)]
    if domain.cyclic and n > 1:
        pairs.append((n - 1, 0))
    for i, j in pairs:
        s, t = slices[i], slices[j]
        if not same_arc(s.right, t.left):
            report.append(f"slices {i} and {j} do not share their common boundary arc")
        for nu, (c, d) in enumerate(zip(s.columns, t.columns)):
            suffix = f" (function {nu})" if multi else ""
            if c.Q.b != d.Q.a:
                report.append(f"b_{{{i}}}≠a_{{{i + 1}}}{suffix}")
                continue
            # order at the shared arc, read through the supporting sides of both slices
            from_left = _max_end(c) if s.support == RIGHT else _other_end(c)
            from_right = _max_end(d) if t.support == LEFT else _other_end(d)
            if from_left != from_right:
                report.append(f"compatibility fails at γ_{{{i}}}{suffix}")
    if functions:
        report.extend(_geometric_report(domain, slices, functions, chooser))
    return report


def _max_end(c: Column):
    if c.Q.is_point:
        return c.Q.a
    va, vb = width_at(c.mu, c.Q.a), width_at(c.mu, c.Q.b)
    return c.Q.b if vb is INFINITY or (va is not INFINITY and vb > va) else c.Q.a


def _other_end(c: Column):
    return c.Q.a if _max_end(c) == c.Q.b and not c.Q.is_point else c.Q.b


def _geometric_report(domain, slices, functions, chooser) -> List[str]:
    """Each slice must be elementary for every function with exactly the stored data."""
    out = []
    L = layout(domain, functions)
    for i, s in enumerate(slices):
        try:
            p, q = position_of(L, s.left), position_of(L, s.right)
            merged = merge_all(span(L, functions, p, q, chooser))
        except MultipizzaError as exc:
            out.append(f"slice {i}: cannot be re-derived from the contact structure ({exc})")
            continue
        if len(merged) != 1:
            out.append(f"slice {i} is not elementary ({len(merged)} elementary pieces)")
            continue
        m = merged[0]
        if m.beta != s.beta or m.support != s.support or any(
                (c.Q, c.mu, c.sign) != (d.Q, d.mu, d.sign) for c, d in zip(m.columns, s.columns)):
            out.append(f"slice {i}: stored data differ from the contact structure")
    return out


def abstract_of(slices: Sequence[Slice], cyclic: bool) -> AbstractMultipizza:
    return AbstractMultipizza(tuple(
        AbstractSlice(s.beta, _SIDE_TO_END[s.support],
                      tuple(AbstractColumn(c.Q, c.mu, c.sign) for c in s.columns))
        for s in slices), cyclic)


# ---------------------------------------------------------------------------
# operations


def compute_pizza(f: Polynomial, domain: DomainSpec = DomainSpec.quadrant(),
                  chooser: Chooser = default_chooser) -> Pizza:
    """Minimal pizza of ``f`` from its perfect zones and their representative arcs."""
    L = layout(domain, [f])
    cuts = minimal_cuts(L, [f])
    zones = zones_at(L, cuts, [f])
    reps = [position_of(L, representative_arc(Z, chooser=chooser)) for Z in zones]
    if any(a.same_as(b) for a, b in zip(reps, reps[1:] + (reps[:1] if L.cyclic else []))):
        reps = list(cuts)  # degenerate cyclic case: coinciding zones, keep the canonical cuts
    check_lateral(L, reps)
    slices = slices_between(L, [f], reps, chooser, single=True)
    if mergeable_neighbours(slices, L.cyclic):
        raise InternalValidationFailure("pizza from perfect zones is not minimal")
    pizza = Pizza(domain, with_arcs(L, slices), (f,))
    report = validate_slices(domain, pizza.slices)
    if report:
        raise InternalValidationFailure("; ".join(report))
    return pizza


def validate_pizza(P: Pizza, geometric: bool = True) -> List[str]:
    """List of violated invariants (empty when valid)."""
    return validate_slices(P.domain, P.slices, P.functions if geometric else ())


def minimize(P: Pizza) -> Pizza:
    return Pizza(P.domain, merge_all(list(P.slices), P.cyclic), P.functions)


def abstract_pizza(P: Pizza) -> AbstractPizza:
    return abstract_of(P.slices, P.cyclic)
