"""Multipizzas of tuples of functions and the equivalence decision.

Construction: the perfect zones of the functions are accumulated one
function at a time; a zone meeting a zone already in the family is replaced
by the intersection (whose order is the larger of the two), other zones are
kept.  One representative arc per zone cuts the domain; inside each span
between consecutive cuts every function is elementary, and when two
functions want opposite supporting arcs the span is split at an arc of the
fine decomposition that separates them.  A final merging pass makes the
result minimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .abstract import (AbstractMultipizza, EquivalenceCertificate, SIGN_TEXT, TEXT_SIGN,
                       combinatorial_equiv)
from .contact import Chooser, Column, default_chooser
from .decomposition import Position, Slice, fine_decomposition, lateral_key, merge_all
from .domain import DomainSpec, Layout, layout
from .errors import InputError, InternalValidationFailure
from .pizza import Pizza, abstract_of, check_lateral, slices_between, validate_slices, with_arcs
from .puiseux.arcs import PuiseuxArc
from .puiseux.polynomial import Polynomial
from .scalars import AffineMap, Segment, format_ext, parse_ext
from .zones import ZoneDescriptor, intersect_zones, minimal_cuts, position_of, representative_arc, zones_at


class Multipizza(Pizza):
    """A pizza whose slices carry one column per function."""

    def to_json(self):
        return {
            "domain": self.domain.to_json(),
            "functions": [f.to_text() for f in self.functions],
            "slices": [{
                "beta": format_ext(s.beta),
                "support": s.support,
                "left_arc": s.left.to_json(),
                "right_arc": s.right.to_json(),
                "columns": [{"Q": c.Q.to_json(), "mu": c.mu.to_json(), "sign": SIGN_TEXT[c.sign]}
                            for c in s.columns],
            } for s in self.slices],
        }

    @classmethod
    def from_json(cls, data) -> "Multipizza":
        from .puiseux.polynomial import parse_polynomial
        slices = []
        for s in data["slices"]:
            cols = [Column(Segment.from_json(c["Q"]), AffineMap.from_json(c["mu"]), TEXT_SIGN[c["sign"]])
                    for c in s["columns"]]
            slices.append(Slice(parse_ext(s["beta"]), PuiseuxArc.from_json(s["left_arc"]),
                                PuiseuxArc.from_json(s["right_arc"]), cols, s["support"]))
        fs = tuple(parse_polynomial(t, require_germ=False) for t in data.get("functions", []))
        return cls(DomainSpec.from_json(data["domain"]), slices, fs)


def combine_zone_families(family: Sequence[ZoneDescriptor],
                          new: Sequence[ZoneDescriptor]) -> List[ZoneDescriptor]:
    """Keep unshared zones; replace meeting pairs by their intersections."""
    out: List[ZoneDescriptor] = []
    used = set()
    for Z in family:
        hits = []
        for j, W in enumerate(new):
            inter = intersect_zones(Z, W)
            if inter is not None:
                hits.append(inter)
                used.add(j)
        out.extend(hits if hits else [Z])
    out.extend(W for j, W in enumerate(new) if j not in used)
    return out


def zone_family(L: Layout, fs: Sequence[Polynomial]) -> List[ZoneDescriptor]:
    family: List[ZoneDescriptor] = []
    for i, f in enumerate(fs):
        zones = zones_at(L, minimal_cuts(L, [f]), [f])
        family = list(zones) if i == 0 else combine_zone_families(family, zones)
    return family


def _representatives(L: Layout, family, chooser: Chooser) -> List[Position]:
    reps: List[Position] = []
    for Z in family:
        pos = position_of(L, representative_arc(Z, chooser=chooser))
        if not any(pos.same_as(r) for r in reps):
            reps.append(pos)
    reps.sort(key=lateral_key(L))
    return reps


def build_multipizza(fs: Sequence[Polynomial], domain: DomainSpec = DomainSpec.quadrant(),
                     chooser: Chooser = default_chooser, minimize: bool = True) -> Multipizza:
    if not fs:
        raise InputError("at least one function is required")
    fs = tuple(fs)
    L = layout(domain, fs)
    reps = _representatives(L, zone_family(L, fs), chooser)
    if L.cyclic and len(reps) < 2:
        reps = minimal_cuts(L, fs)  # every arc is generic: any two distinct cuts will do
    elif not L.cyclic:
        check_lateral(L, reps)
    slices = slices_between(L, fs, reps, chooser)
    if minimize:
        slices = merge_all(slices, L.cyclic)
    M = Multipizza(domain, with_arcs(L, slices), fs)
    report = validate_slices(domain, M.slices)
    if report:
        raise InternalValidationFailure("; ".join(report))
    return M


def fine_multipizza(fs: Sequence[Polynomial], domain: DomainSpec = DomainSpec.quadrant(),
                    chooser: Chooser = default_chooser) -> Multipizza:
    """Independent construction: merge the fine decomposition of the whole domain."""
    fs = tuple(fs)
    L = layout(domain, fs)
    slices = merge_all(fine_decomposition(L, fs, chooser), L.cyclic)
    return Multipizza(domain, with_arcs(L, slices), fs)


def minimize_multipizza(M: Multipizza) -> Multipizza:
    return Multipizza(M.domain, merge_all(list(M.slices), M.cyclic), M.functions)


def validate_multipizza(M: Multipizza, geometric: bool = True) -> List[str]:
    return validate_slices(M.domain, M.slices, M.functions if geometric else ())


def abstract_multipizza(M: Multipizza) -> AbstractMultipizza:
    return abstract_of(M.slices, M.cyclic)


def project(M: Multipizza, nu: int) -> Multipizza:
    """Keep only column ``nu`` and re-minimize."""
    slices = [Slice(s.beta, s.left, s.right, [s.columns[nu]],
                    s.support if not s.columns[nu].Q.is_point else "none") for s in M.slices]
    return Multipizza(M.domain, merge_all(slices, M.cyclic), (M.functions[nu],) if M.functions else ())


def decide_multiK(fs: Sequence[Polynomial], gs: Sequence[Polynomial],
                  domain: DomainSpec = DomainSpec.quadrant(), allow_reversal: bool = True,
                  permute_columns: bool = False) -> EquivalenceCertificate:
    if len(fs) != len(gs) or not fs:
        raise InputError("multigerms must have the same positive number of functions")
    A = abstract_multipizza(build_multipizza(fs, domain))
    B = abstract_multipizza(build_multipizza(gs, domain))
    return combinatorial_equiv(A, B, allow_reversal, permute_columns)
