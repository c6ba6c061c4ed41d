from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from multipizza.contact import Frame, FunctionModel, Series
from multipizza.errors import NonGermError, PolynomialSyntaxError, ZeroPolynomial
from multipizza.puiseux import numberfield as nf
from multipizza.puiseux.arcs import (X_OF_Y, Y_OF_X, PuiseuxArc, coeff_from_json, coeff_to_json,
                                     ord_and_coefficient, ord_along, puiseux_roots, sign_along, tord)
from multipizza.puiseux.newton import newton_polygon
from multipizza.puiseux.polynomial import Polynomial, parse_polynomial
from multipizza.scalars import INFINITY

F = Fraction
X, Y = sympy.symbols("x y")


def arc(*terms, chart=Y_OF_X, sector=(1, 1)):
    return PuiseuxArc(chart, tuple((F(e), F(c)) for e, c in terms), INFINITY, sector)


# -- parsing ---------------------------------------------------------------------

@pytest.mark.parametrize("text, terms", [
    ("x^2+y^4", {(2, 0): 1, (0, 4): 1}),
    ("x^3-y^2", {(3, 0): 1, (0, 2): -1}),
    ("(y-x)^2", {(0, 2): 1, (1, 1): -2, (2, 0): 1}),
    ("3/2*x*y - x**2/4", {(1, 1): F(3, 2), (2, 0): F(-1, 4)}),
    ("(x - 2*y", None),
])
def test_parse_examples(text, terms):
    if terms is None:
        with pytest.raises(PolynomialSyntaxError):
            parse_polynomial(text)
        return
    assert parse_polynomial(text).terms == {k: F(v) for k, v in terms.items()}


def test_parse_rejects_constant_terms():
    with pytest.raises(NonGermError):
        parse_polynomial("x^2+1")


def test_syntax_errors_report_positions():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial("x^2+*y")
    assert info.value.position == 4


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda m: m != (0, 0)),
                       st.builds(F, st.integers(-40, 40).filter(bool), st.integers(1, 6)),
                       min_size=1, max_size=6))
def test_text_round_trip(terms):
    f = Polynomial(terms)
    assert parse_polynomial(f.to_text()) == f
    assert Polynomial.from_sympy(f.to_sympy(X, Y), X, Y) == f


# -- Newton polygons -----------------------------------------------------------------

def test_newton_polygon_of_cusp():
    (edge,) = newton_polygon(parse_polynomial("x^3-y^2"), Y_OF_X)
    assert edge.exponent == F(3, 2)
    assert [F(c) for c in edge.characteristic] == [1, 0, -1]


def test_newton_polygon_of_a_coordinate_has_no_edges():
    assert newton_polygon(parse_polynomial("x"), Y_OF_X) == []


def test_newton_polygon_of_a_square():
    (edge,) = newton_polygon(parse_polynomial("(y-x)^2"), Y_OF_X)
    assert edge.exponent == 1
    assert [F(c) for c in edge.characteristic] == [1, -2, 1]


def test_newton_polygon_of_zero():
    with pytest.raises(ZeroPolynomial):
        newton_polygon(Polynomial(), Y_OF_X)


# -- roots ---------------------------------------------------------------------------

def test_roots_of_cusp():
    ((a, m),) = puiseux_roots(parse_polynomial("x^3-y^2"), Y_OF_X)
    assert m == 1 and a.terms == ((F(3, 2), F(1)),)


def test_definite_form_has_no_quadrant_roots():
    assert puiseux_roots(parse_polynomial("x^2+y^4"), Y_OF_X) == []


def test_square_gives_multiplicity_two():
    ((a, m),) = puiseux_roots(parse_polynomial("(y-x)^2"), Y_OF_X)
    assert m == 2 and a.terms == ((F(1), F(1)),)


def test_irrational_root_coefficients():
    ((a, m),) = puiseux_roots(parse_polynomial("y^2-2*x^2"), Y_OF_X)
    (e, c), = a.terms
    assert e == 1 and nf.coeff_eq(nf.mul(c, c), F(2)) and nf.sign(c) > 0


def test_lazy_root_deepens_on_demand():
    f = parse_polynomial("y^2-x^3-x^4")
    ((a, _),) = puiseux_roots(f, Y_OF_X)
    assert ord_along(f, a) is INFINITY
    deep = a.deepened(F(9, 2))
    # y = x^(3/2) (1 + x)^(1/2) = x^(3/2) + x^(5/2)/2 - x^(7/2)/8 + ...
    assert deep.coefficient(F(5, 2)) == F(1, 2)
    assert deep.coefficient(F(7, 2)) == F(-1, 8)


def _sympy_vanishes(f: Polynomial, a: PuiseuxArc) -> bool:
    t = sympy.symbols("t", positive=True)
    phi = sum(sympy.Rational(c.numerator, c.denominator) * t ** sympy.Rational(e.numerator, e.denominator)
              for e, c in a.terms)
    expr = f.to_sympy(t, phi) if a.chart == Y_OF_X else f.to_sympy(phi, t)
    return sympy.simplify(sympy.expand(expr)) == 0


factor = st.tuples(st.integers(1, 5), st.integers(1, 5), st.sampled_from([1, 2, 3, F(1, 2)]))


@settings(max_examples=40, deadline=None)
@given(st.lists(factor, min_size=1, max_size=3))
def test_roots_of_binomial_products_vanish(factors):
    text = "*".join(f"(y^{p}-({c})*x^{q})" for p, q, c in factors)
    f = parse_polynomial(text)
    roots = puiseux_roots(f, Y_OF_X)
    for a, _ in roots:
        assert ord_along(f, a) is INFINITY
        assert sign_along(f, a) == 0
        if a.trunc is INFINITY and all(isinstance(c, Fraction) for _, c in a.terms):
            assert _sympy_vanishes(f, a)
    # every positive root y = c^(1/p) x^(q/p) with q/p >= 1 shows up
    leading = [a.terms[0] for a, _ in roots]
    for p, q, c in factors:
        if F(q, p) >= 1:
            assert any(le == F(q, p) and nf.compare(nf.mul(lc, lc) if p == 2 else lc, F(0)) > 0
                       for le, lc in leading)


# -- orders, signs, contact ----------------------------------------------------------------

@pytest.mark.parametrize("text, a, expected", [
    ("x^2+y^4", arc(chart=X_OF_Y), F(4)),
    ("x^3-y^2", arc((F(3, 2), 1)), INFINITY),
    ("x^2-y^3", arc((1, 1)), F(2)),
    ("x", arc(), F(1)),
    ("x", arc(chart=X_OF_Y), INFINITY),
])
def test_ord_along_examples(text, a, expected):
    assert ord_along(parse_polynomial(text), a) == expected


def test_leading_coefficient_along_diagonal():
    assert ord_and_coefficient(parse_polynomial("x^2-y^3"), arc((1, 1))) == (F(2), F(1))


@pytest.mark.parametrize("text, a, expected", [
    ("x^2+y^4", arc((F(5, 4), 3)), 1),
    ("x^3-y^2", arc((2, 1)), 1),
    ("x^3-y^2", arc((F(3, 2), 1)), 0),
    ("x^3-y^2", arc(chart=X_OF_Y), -1),
    ("x^3-y^2", arc((1, -1), sector=(1, -1)), -1),
])
def test_sign_along_examples(text, a, expected):
    assert sign_along(parse_polynomial(text), a) == expected


def test_tord_examples():
    g = arc((F(3, 2), 1))
    assert tord(g, g) is INFINITY
    assert tord(g, arc((F(3, 2), 2))) == F(3, 2)
    assert tord(arc(), arc(chart=X_OF_Y)) == 1


exps = st.sampled_from([F(1), F(4, 3), F(3, 2), F(5, 3), F(2), F(5, 2), F(3), F(7, 2)])
coeffs = st.sampled_from([F(-2), F(-1), F(-1, 2), F(1, 3), F(1), F(2), F(3)])
series = st.dictionaries(exps, coeffs, max_size=4).map(lambda d: tuple(sorted(d.items())))
small_polys = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 3)).filter(lambda m: m != (0, 0)),
    st.integers(-3, 3).filter(bool).map(F), min_size=1, max_size=4).map(Polynomial)


@given(series, series, series)
def test_tord_is_an_ultrametric(a, b, c):
    A, B, C = (PuiseuxArc(Y_OF_X, s) for s in (a, b, c))
    ab, bc, ac = tord(A, B), tord(B, C), tord(A, C)
    assert ac >= min(ab, bc)
    assert (ab is INFINITY) == (a == b)


@settings(deadline=None)
@given(small_polys, small_polys, series)
def test_ord_is_additive_on_products(f, g, s):
    a = PuiseuxArc(Y_OF_X, s)
    lhs = ord_along(f * g, a)
    of, og = ord_along(f, a), ord_along(g, a)
    assert lhs == (INFINITY if INFINITY in (of, og) else of + og)
    assert sign_along(f * g, a) == sign_along(f, a) * sign_along(g, a)


@settings(deadline=None)
@given(small_polys, series)
def test_root_contact_formula_matches_substitution(f, s):
    """ord from root contacts (order formula) and from plugging the arc in."""
    model = FunctionModel(f, Frame())
    a = PuiseuxArc(Y_OF_X, s)
    assert model.order(Series(s)) == ord_along(f, a)
    assert model.sign(Series(s)) == sign_along(f, a)


@settings(deadline=None)
@given(small_polys, series)
def test_swapping_coordinates_swaps_charts(f, s):
    assert ord_along(f, PuiseuxArc(X_OF_Y, s)) == ord_along(f.swap(), PuiseuxArc(Y_OF_X, s))


# -- algebraic coefficients ---------------------------------------------------------------

def test_square_root_of_two_arithmetic():
    roots, nonreal = nf.real_roots([F(-2), F(0), F(1)])
    assert nonreal == 0
    (m, _), (p, _) = roots
    assert nf.compare(m, p) < 0 and nf.coeff_eq(nf.neg(m), p)
    assert nf.compare(p, F(141, 100)) > 0 and nf.compare(p, F(142, 100)) < 0
    assert nf.coeff_eq(nf.mul(p, p), F(2))
    assert nf.coeff_eq(nf.mul(p, nf.inv(p)), F(1))


def test_irreducible_quadratic_has_no_real_roots():
    roots, nonreal = nf.real_roots([F(1), F(0), F(1)])
    assert roots == [] and nonreal == 2


def test_algebraic_coefficient_json_round_trip():
    (_, _), (p, _) = nf.real_roots([F(-3), F(0), F(1)])[0]
    again = coeff_from_json(coeff_to_json(p))
    assert nf.coeff_eq(again, p)
    assert coeff_from_json(coeff_to_json(F(-5, 3))) == F(-5, 3)


def test_arc_json_round_trip():
    a = PuiseuxArc.from_json({"chart": "y_of_x", "terms": [["3/2", "1"]], "trunc": "5/2"})
    assert a.terms == ((F(3, 2), F(1)),) and a.trunc == F(5, 2)
    assert PuiseuxArc.from_json(a.to_json()) == a
