"""Extended rationals, affine width maps and directed order segments.

Finite values are plain :class:`fractions.Fraction` instances; the extra
point at infinity is the singleton :data:`INFINITY`.  Nothing here ever
touches floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import EvalAtInfinity, SegmentNotContained


@total_ordering
class _Infinity:
    """The element +inf, greater than every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("multipizza-infinity")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self
        raise ArithmeticError("inf - inf is undefined")

    def __rsub__(self, other):
        raise ArithmeticError("finite - inf is undefined")

    def __mul__(self, other):
        if other is self:
            return self
        if isinstance(other, (int, Fraction)):
            if other > 0:
                return self
            raise ArithmeticError("inf times a non-positive rational")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and other > 0:
            return self
        raise ArithmeticError("inf divided by a non-positive rational")


INFINITY = _Infinity()

ExtRat = Union[Fraction, _Infinity]


def is_inf(value) -> bool:
    return value is INFINITY


def ext(value) -> ExtRat:
    """Coerce ints, Fractions, strings ("3/2", "inf") to an ExtRat."""
    if value is INFINITY:
        return value
    if isinstance(value, str):
        return parse_ext(value)
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an extended rational")


def parse_ext(text: str) -> ExtRat:
    text = text.strip()
    if text in ("inf", "+inf", "∞"):
        return INFINITY
    return Fraction(text)


def format_ext(value: ExtRat) -> str:
    """Canonical JSON spelling: "inf", "3", "-3/2"."""
    if value is INFINITY:
        return "inf"
    return str(Fraction(value))


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


def ext_compare(a: ExtRat, b: ExtRat) -> Ordering:
    a, b = ext(a), ext(b)
    if a == b:
        return Ordering.EQUAL
    return Ordering.LESS if a < b else Ordering.GREATER


def ext_min(*values: ExtRat) -> ExtRat:
    return min(values, key=_sort_key)


def ext_max(*values: ExtRat) -> ExtRat:
    return max(values, key=_sort_key)


def _sort_key(value):
    return (1, 0) if value is INFINITY else (0, value)


@dataclass(frozen=True)
class Segment:
    """Closed directed segment [a, b]; a is the value at the first boundary arc."""

    a: ExtRat
    b: ExtRat

    def __post_init__(self):
        object.__setattr__(self, "a", ext(self.a))
        object.__setattr__(self, "b", ext(self.b))

    @property
    def is_point(self) -> bool:
        return self.a == self.b

    @property
    def direction(self) -> int:
        """+1 if increasing, -1 if decreasing, 0 for a point."""
        if self.a == self.b:
            return 0
        return 1 if self.a < self.b else -1

    @property
    def low(self) -> ExtRat:
        return ext_min(self.a, self.b)

    @property
    def high(self) -> ExtRat:
        return ext_max(self.a, self.b)

    def contains(self, q: ExtRat) -> bool:
        q = ext(q)
        return self.low <= q <= self.high

    def contains_segment(self, other: "Segment") -> bool:
        return self.contains(other.a) and self.contains(other.b)

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def to_json(self):
        return [format_ext(self.a), format_ext(self.b)]

    @classmethod
    def from_json(cls, data):
        return cls(parse_ext(data[0]), parse_ext(data[1]))

    def __str__(self):
        if self.is_point:
            return "{" + format_ext(self.a) + "}"
        return f"[{format_ext(self.a)},{format_ext(self.b)}]"


@dataclass(frozen=True)
class AffineMap:
    """q -> slope*q + intercept, or a constant map when ``const`` is set."""

    slope: Fraction = Fraction(0)
    intercept: Fraction = Fraction(0)
    const: ExtRat | None = None

    def __post_init__(self):
        if self.const is not None:
            object.__setattr__(self, "const", ext(self.const))
            object.__setattr__(self, "slope", Fraction(0))
            object.__setattr__(self, "intercept", Fraction(0))
        else:
            object.__setattr__(self, "slope", Fraction(self.slope))
            object.__setattr__(self, "intercept", Fraction(self.intercept))

    @classmethod
    def constant(cls, value: ExtRat) -> "AffineMap":
        return cls(const=value)

    @classmethod
    def through(cls, q0: Fraction, m0: Fraction, slope: Fraction) -> "AffineMap":
        """The line of the given slope passing through (q0, m0)."""
        slope = Fraction(slope)
        return cls(slope, Fraction(m0) - slope * Fraction(q0))

    @property
    def is_constant(self) -> bool:
        return self.const is not None

    def to_json(self):
        if self.const is not None:
            return {"const": format_ext(self.const)}
        return {"slope": format_ext(self.slope), "intercept": format_ext(self.intercept)}

    @classmethod
    def from_json(cls, data):
        if "const" in data:
            return cls(const=parse_ext(data["const"]))
        return cls(Fraction(data["slope"]), Fraction(data["intercept"]))

    def __str__(self):
        if self.const is not None:
            return format_ext(self.const)
        num, den = self.slope.numerator, self.slope.denominator
        if num == 0:
            term = ""
        else:
            head = "-" if num < 0 else ""
            mag = abs(num)
            term = head + ("" if mag == 1 else str(mag)) + "q" + ("" if den == 1 else f"/{den}")
        if self.intercept == 0:
            return term or "0"
        if not term:
            return format_ext(self.intercept)
        sign = "-" if self.intercept < 0 else "+"
        return f"{term}{sign}{format_ext(abs(self.intercept))}"


def affine_eval(m: AffineMap, q: ExtRat) -> ExtRat:
    q = ext(q)
    if m.const is not None:
        return m.const
    if q is INFINITY:
        raise EvalAtInfinity("non-constant affine map evaluated at infinity")
    return m.slope * q + m.intercept


def affine_restrict(m: AffineMap, seg: Segment, within: Segment | None = None) -> AffineMap:
    """Restrict ``m`` (defined on ``within``) to the sub-segment ``seg``.

    Point segments collapse to the constant map with the evaluated value.
    """
    if within is not None and not within.contains_segment(seg):
        raise SegmentNotContained(f"{seg} is not contained in {within}")
    if seg.is_point and m.const is None:
        return AffineMap.constant(affine_eval(m, seg.a))
    return m
