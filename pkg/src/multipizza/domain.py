"""Domains (quadrant, explicit triangle, whole plane) and their chart layout.

A domain is laid out as a lateral sequence of *pieces*.  Each piece is a
Hölder triangle in one local frame, traversed forward or backward.  The
quadrant is split along a transversal glue line ``y = k x`` whose slope is
chosen so that no root or complex-root prefix is tangent to it; the plane
is four quadrants glued along the half-axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterator, List, Optional, Sequence

from .contact import Frame, FunctionModel, Series, lex_compare
from .errors import InputError
from .puiseux import numberfield as nf
from .puiseux.arcs import PuiseuxArc, Y_OF_X
from .puiseux.polynomial import Polynomial
from .scalars import INFINITY


class DomainKind(Enum):
    QUADRANT = "quadrant"
    TRIANGLE = "triangle"
    PLANE = "plane"


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind = DomainKind.QUADRANT
    left: Optional[PuiseuxArc] = None
    right: Optional[PuiseuxArc] = None

    def __post_init__(self):
        if self.kind is DomainKind.TRIANGLE:
            if self.left is None or self.right is None:
                raise InputError("a triangle domain needs two boundary arcs")
            if self.left.chart != self.right.chart or self.left.sector != self.right.sector:
                raise InputError("triangle boundaries must share chart and sector")
            if self.left == self.right:
                raise InputError("triangle boundaries must be distinct arcs")
            if any(e < 1 for e, _ in self.left.terms + self.right.terms):
                raise InputError("triangle boundary exponents must be >= 1")

    @classmethod
    def quadrant(cls) -> "DomainSpec":
        return cls(DomainKind.QUADRANT)

    @classmethod
    def plane(cls) -> "DomainSpec":
        return cls(DomainKind.PLANE)

    @classmethod
    def triangle(cls, left: PuiseuxArc, right: PuiseuxArc) -> "DomainSpec":
        return cls(DomainKind.TRIANGLE, left, right)

    @property
    def cyclic(self) -> bool:
        return self.kind is DomainKind.PLANE

    def to_json(self):
        if self.kind is DomainKind.TRIANGLE:
            return {"kind": "triangle", "left": self.left.to_json(), "right": self.right.to_json()}
        return {"kind": self.kind.value}

    @classmethod
    def from_json(cls, data) -> "DomainSpec":
        if isinstance(data, str):
            data = {"kind": data}
        try:
            kind = DomainKind(str(data.get("kind", "quadrant")).lower())
        except ValueError as exc:
            raise InputError(f"unknown domain kind {data.get('kind')!r}") from exc
        if kind is DomainKind.TRIANGLE:
            return cls.triangle(PuiseuxArc.from_json(data["left"]), PuiseuxArc.from_json(data["right"]))
        return cls(kind)


@dataclass
class Piece:
    """A triangle ``left < right`` (lexicographic) in one frame, maybe traversed backward."""

    frame: Frame
    left: Series
    right: Series
    backward: bool = False

    @property
    def start(self) -> Series:
        return self.right if self.backward else self.left

    @property
    def end(self) -> Series:
        return self.left if self.backward else self.right

    def lateral(self, a: Series, b: Series) -> int:
        """Compare two arcs of the piece in the traversal direction."""
        c = lex_compare(a, b)
        return -c if self.backward else c

    def contains(self, s: Series) -> bool:
        return lex_compare(self.left, s) <= 0 <= lex_compare(self.right, s)


@dataclass
class Layout:
    spec: DomainSpec
    pieces: List[Piece]
    glue: Optional[Fraction] = None
    # shared[i] is True when the end of piece i is the start of piece i+1 (cyclically)
    shared: List[bool] = field(default_factory=list)

    @property
    def cyclic(self) -> bool:
        return self.spec.cyclic


def slopes_by_height() -> Iterator[Fraction]:
    """1, 2, 1/2, 3, 1/3, 3/2, 2/3, ... positive rationals by increasing height."""
    n = 1
    while True:
        found = []
        for other in range(1, n + 1):
            if gcd(n, other) == 1:
                found.append((Fraction(n, other), Fraction(other, n)))
        for a, b in found:
            yield a
            if b != a:
                yield b
        n += 1


QUADRANT_SIGNS = ((1, 1), (-1, 1), (-1, -1), (1, -1))


def _forbidden_slopes(functions: Sequence[Polynomial], sectors) -> List:
    """Tangent slopes (|y|/|x|) of roots and complex-root prefixes in the given sectors."""
    bad = []
    one = Fraction(1)
    for sx, sy in sectors:
        for f in functions:
            for swap in (False, True):
                model = FunctionModel(f, Frame(sx, sy, swap))
                for obj in model.objects:
                    if obj.kappa is not INFINITY and obj.kappa <= one:
                        continue
                    c = obj.series.coefficient(one)
                    if nf.sign(c) <= 0:
                        continue
                    bad.append(nf.inv(c) if swap else c)
    return bad


def glue_slope(functions: Sequence[Polynomial], sectors) -> Fraction:
    bad = _forbidden_slopes(functions, sectors)
    for k in slopes_by_height():
        if not any(nf.coeff_eq(k, b) for b in bad):
            return k
    raise AssertionError("unreachable")


def _quadrant_pieces(sx: int, sy: int, k: Fraction) -> List[Piece]:
    a = Piece(Frame(sx, sy, False), Series(()), Series(((Fraction(1), k),)))
    b = Piece(Frame(sx, sy, True), Series(()), Series(((Fraction(1), 1 / k),)), backward=True)
    if sx * sy > 0:
        return [a, b]
    a.backward, b.backward = True, False
    return [b, a]


def layout(spec: DomainSpec, functions: Sequence[Polynomial]) -> Layout:
    if spec.kind is DomainKind.TRIANGLE:
        frame = Frame(spec.left.sector[0], spec.left.sector[1], spec.left.chart != Y_OF_X)
        left, right = Series(spec.left.terms), Series(spec.right.terms)
        backward = lex_compare(left, right) > 0
        if backward:
            left, right = right, left
        return Layout(spec, [Piece(frame, left, right, backward)], None, [False])
    sectors = [(1, 1)] if spec.kind is DomainKind.QUADRANT else list(QUADRANT_SIGNS)
    k = glue_slope(functions, sectors)
    pieces: List[Piece] = []
    for sx, sy in sectors:
        pieces.extend(_quadrant_pieces(sx, sy, k))
    shared = [True] * len(pieces)
    if not spec.cyclic:
        shared[-1] = False
    return Layout(spec, pieces, k, shared)
