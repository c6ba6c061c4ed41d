from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import CORPUS, corpus_ids, germs
from multipizza.contact import Column
from multipizza.decomposition import Slice
from multipizza.multipizza import build_multipizza
from multipizza.oracle import (DIVERGED, SamplePlan, agrees, estimate_contact, estimate_ord,
                               estimate_ord_by_distance, estimate_sign, geometric_grid, verify_pizza)
from multipizza.pizza import Pizza, compute_pizza
from multipizza.puiseux.arcs import X_OF_Y, Y_OF_X, PuiseuxArc, ord_along, puiseux_roots, sign_along
from multipizza.puiseux.polynomial import Polynomial, parse_polynomial
from multipizza.scalars import INFINITY, AffineMap

F = Fraction
PLAN = SamplePlan()


def arc(*terms, chart=Y_OF_X, sector=(1, 1)):
    return PuiseuxArc(chart, tuple((F(e), F(c)) for e, c in terms), INFINITY, sector)


@pytest.mark.parametrize("text, a, expected", [
    ("x^2+y^4", arc(chart=X_OF_Y), 4.0),
    ("x^3-y^2", arc((F(3, 2), 1)), DIVERGED),
    ("x^2-y^3", arc((1, 1)), 2.0),
])
def test_order_estimates(text, a, expected):
    est = estimate_ord(parse_polynomial(text), a)
    if expected == DIVERGED:
        assert est == DIVERGED
    else:
        assert abs(est - expected) <= PLAN.tolerance


def test_irrational_root_diverges():
    f = parse_polynomial("y^2-2*x^2")
    ((root, _),) = puiseux_roots(f, Y_OF_X)
    assert estimate_ord(f, root) == DIVERGED


def test_lazy_root_diverges():
    f = parse_polynomial("y^2-x^3-x^4")
    ((root, _),) = puiseux_roots(f, Y_OF_X)
    assert root.trunc is not INFINITY
    assert estimate_ord(f, root) == DIVERGED


def test_contact_estimate():
    est = estimate_contact(arc((F(3, 2), 1)), arc((F(3, 2), 1), (F(5, 2), 4)))
    assert abs(est - 2.5) <= PLAN.tolerance
    with pytest.raises(ValueError):
        estimate_contact(arc(), arc(chart=X_OF_Y))


def test_sign_estimates():
    f = parse_polynomial("x^3-y^2")
    assert estimate_sign(f, arc((2, 1))) == 1
    assert estimate_sign(f, arc(chart=X_OF_Y)) == -1
    assert estimate_sign(f, arc((F(3, 2), 1))) == 0


def test_agreement_rule():
    assert agrees(INFINITY, DIVERGED, 0.05)
    assert not agrees(INFINITY, 7.0, 0.05)
    assert not agrees(F(3), DIVERGED, 0.05)
    assert agrees(F(3), 3.04, 0.05) and not agrees(F(3), 3.06, 0.05)


def test_sample_plan_validation():
    assert len(PLAN.t_values) == 16
    assert float(PLAN.t_values[0]) == pytest.approx(1e-3) and float(PLAN.t_values[-1]) == pytest.approx(1e-9)
    with pytest.raises(ValueError):
        SamplePlan(t_values=geometric_grid(7))
    with pytest.raises(ValueError):
        SamplePlan(t_values=tuple(reversed(geometric_grid())))
    with pytest.raises(ValueError):
        SamplePlan(t_values=(0,) + geometric_grid()[1:])
    with pytest.raises(ValueError):
        SamplePlan(tolerance=0)


# -- monomials along power arcs: exact answers a + b*e -----------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.sampled_from([F(1), F(4, 3), F(3, 2), F(2), F(5, 2)]),
       st.sampled_from([F(-3), F(-1, 2), F(1, 3), F(2)]))
def test_monomials_along_power_arcs(a, b, e, c):
    if a == b == 0:
        return
    f = Polynomial({(a, b): F(1)})
    g = arc((e, c))
    est = estimate_ord(f, g)
    assert ord_along(f, g) == a + b * e
    assert abs(est - float(a + b * e)) <= PLAN.tolerance
    assert estimate_sign(f, g) == sign_along(f, g)


# -- verification ---------------------------------------------------------------------------

def test_cusp_pizza_verifies():
    f = parse_polynomial("x^3-y^2")
    report = verify_pizza(compute_pizza(f), [f])
    assert report.ok and report.to_json()["exceedances"] == 0
    assert {c.kind for c in report.checks} == {"boundary", "interior", "sign"}


def test_tampered_width_is_caught_at_every_sample():
    f = parse_polynomial("x^3-y^2")
    P = compute_pizza(f)
    s = P.slices[2]
    tampered = Slice(s.beta, s.left, s.right, [Column(s.Q, AffineMap(2, 0), s.sign)], s.support)
    bad = Pizza(P.domain, P.slices[:2] + [tampered], P.functions)
    report = verify_pizza(bad, [f], samples_per_slice=5)
    interior = [c for c in report.checks if c.slice == 2 and c.kind == "interior"]
    assert len(interior) == 5 and not any(c.passed for c in interior)
    assert all(c.passed for c in report.checks if c.slice != 2)


def test_triple_multipizza_verifies():
    fs = [parse_polynomial(t) for t in ("x^2+y^4", "x", "x^3-y^2")]
    report = verify_pizza(build_multipizza(fs), fs)
    assert report.ok and len(report.checks) > 100


def test_report_json_fields():
    f = parse_polynomial("x")
    data = verify_pizza(compute_pizza(f), [f], samples_per_slice=1).to_json()
    check = data["checks"][0]
    assert set(check) == {"slice", "nu", "kind", "q", "predicted", "estimated", "pass"}
    assert data["total"] == len(data["checks"])


@lru_cache(maxsize=None)
def corpus_pizza(name):
    entry = next(e for e in CORPUS if e[0] == name)
    fs, domain = germs(entry)
    return build_multipizza(fs, domain), fs


@pytest.mark.parametrize("name", corpus_ids())
def test_boundary_estimates_match_exact_orders(name):
    """Both routes to ord along every slice boundary arc: exact substitution and sampling."""
    M, fs = corpus_pizza(name)
    for s in M.slices:
        for g in (s.left_arc, s.right_arc):
            for f in fs:
                exact = ord_along(f, g)
                assert agrees(exact, estimate_ord(f, g), PLAN.tolerance)


@pytest.mark.parametrize("name", corpus_ids())
def test_distance_parametrization_gives_the_same_orders(name):
    M, fs = corpus_pizza(name)
    for s in M.slices:
        for g in (s.left_arc, s.right_arc):
            for f in fs:
                a, b = estimate_ord(f, g), estimate_ord_by_distance(f, g)
                if a == DIVERGED or b == DIVERGED:
                    assert a == b
                else:
                    assert abs(a - b) <= 2 * PLAN.tolerance
