from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multipizza.errors import EvalAtInfinity, SegmentNotContained
from multipizza.scalars import (INFINITY, AffineMap, Ordering, Segment, affine_eval, affine_restrict,
                                ext, ext_compare, format_ext, parse_ext)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10 ** 6)
extended = st.one_of(rationals, st.just(INFINITY))


@pytest.mark.parametrize("a, b, expected", [
    (Fraction(3, 2), Fraction(2), Ordering.LESS),
    (INFINITY, INFINITY, Ordering.EQUAL),
    (Fraction(7, 2), INFINITY, Ordering.LESS),
    (INFINITY, Fraction(10 ** 9), Ordering.GREATER),
])
def test_ext_compare_examples(a, b, expected):
    assert ext_compare(a, b) is expected


@pytest.mark.parametrize("m, q, expected", [
    (AffineMap(Fraction(1, 2), 0), 4, Fraction(2)),
    (AffineMap(1, Fraction(-3, 2)), 3, Fraction(3, 2)),
    (AffineMap.constant(INFINITY), 5, INFINITY),
    (AffineMap.constant(Fraction(3, 2)), INFINITY, Fraction(3, 2)),
])
def test_affine_eval_examples(m, q, expected):
    assert affine_eval(m, q) == expected


def test_affine_eval_refuses_infinity_for_lines():
    with pytest.raises(EvalAtInfinity):
        affine_eval(AffineMap(1, 0), INFINITY)


def test_affine_restrict_examples():
    m = AffineMap(1, Fraction(-3, 2))
    assert affine_restrict(m, Segment(3, 4), Segment(3, INFINITY)) == m
    assert affine_restrict(AffineMap(Fraction(1, 2), 0), Segment(2, 2), Segment(2, 4)) == AffineMap.constant(1)
    assert affine_restrict(AffineMap(1, 0), Segment(1, 2), Segment(1, INFINITY)) == AffineMap(1, 0)
    with pytest.raises(SegmentNotContained):
        affine_restrict(m, Segment(2, 4), Segment(3, INFINITY))


def test_affine_maps_compare_fieldwise():
    assert AffineMap(Fraction(1, 2), 0) == AffineMap(Fraction(2, 4), Fraction(0))
    assert AffineMap(Fraction(1, 2), 0) != AffineMap(2, 0)
    assert AffineMap.constant(1) != AffineMap(0, 1)


def test_segment_directions():
    assert Segment(3, INFINITY).direction == 1
    assert Segment(INFINITY, 3).direction == -1
    assert Segment(2, 2).is_point and Segment(2, 2).direction == 0
    assert Segment(3, 2).reversed() == Segment(2, 3)


def test_json_spellings():
    assert format_ext(INFINITY) == "inf"
    assert format_ext(Fraction(-6, 4)) == "-3/2"
    assert parse_ext("inf") is INFINITY and parse_ext("3/2") == Fraction(3, 2)
    assert AffineMap(1, Fraction(-3, 2)).to_json() == {"slope": "1", "intercept": "-3/2"}
    assert AffineMap.constant(INFINITY).to_json() == {"const": "inf"}
    assert Segment(3, INFINITY).to_json() == ["3", "inf"]
    with pytest.raises(TypeError):
        ext(1.5)


def test_infinity_absorbs_addition():
    assert INFINITY + Fraction(3) is INFINITY
    assert Fraction(3) + INFINITY is INFINITY


@given(extended, extended, extended)
def test_ext_compare_is_a_total_order(a, b, c):
    ab, ba = ext_compare(a, b), ext_compare(b, a)
    assert (ab is Ordering.LESS) == (ba is Ordering.GREATER)
    assert (ab is Ordering.EQUAL) == (ba is Ordering.EQUAL)
    if ab is not Ordering.GREATER and ext_compare(b, c) is not Ordering.GREATER:
        assert ext_compare(a, c) is not Ordering.GREATER


@given(rationals)
def test_every_rational_is_below_infinity(q):
    assert ext_compare(q, INFINITY) is Ordering.LESS
    assert q < INFINITY and INFINITY > q


@given(rationals, rationals)
def test_rational_arithmetic_is_exact(a, b):
    assert (a + b) - b == a


unit = st.fractions(0, 1, max_denominator=30)


@given(rationals, rationals, rationals, rationals, unit, unit)
def test_restriction_preserves_values(slope, intercept, lo, hi, u, v):
    lo, hi = min(lo, hi), max(lo, hi)
    m = AffineMap(slope, intercept)
    u, v = min(u, v), max(u, v)
    sub_lo, sub_hi = lo + (hi - lo) * u, lo + (hi - lo) * v
    r = affine_restrict(m, Segment(sub_lo, sub_hi), Segment(lo, hi))
    for q in (sub_lo, sub_hi, (sub_lo + sub_hi) / 2):
        assert affine_eval(r, q) == affine_eval(m, q)


@given(extended, extended)
def test_segment_json_round_trip(a, b):
    s = Segment(a, b)
    assert Segment.from_json(s.to_json()) == s
