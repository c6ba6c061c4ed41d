"""End-to-end acceptance run: one PASS/FAIL line per criterion.

Each test checks one criterion at its stated tolerance and prints a single
summary line (visible with or without ``-s``) before asserting.
"""

import random
import time
from fractions import Fraction

import pytest

import multipizza.multipizza as multipizza_module
from corpus import CORPUS, germs
from multipizza.abstract import combinatorial_equiv, first_failure
from multipizza.contact import random_chooser
from multipizza.decomposition import LEFT, RIGHT
from multipizza.domain import DomainKind, DomainSpec, layout
from multipizza.multipizza import abstract_multipizza, build_multipizza, decide_multiK, project, validate_multipizza
from multipizza.oracle import SamplePlan, arc_at_contact, interior_values, verify_pizza
from multipizza.pizza import abstract_pizza, compute_pizza, validate_pizza, width_at
from multipizza.puiseux.arcs import X_OF_Y, Y_OF_X, PuiseuxArc, ord_along
from multipizza.puiseux.polynomial import parse_polynomial
from multipizza.scalars import INFINITY, AffineMap, Segment, affine_eval
from multipizza.zones import zone_order

F = Fraction
RANDOM_CHOICES = 100


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        return ok
    return emit


def P(text):
    return parse_polynomial(text)


def rows(pizza):
    return [(s.Q, s.mu) for s in pizza.slices]


def single_germs():
    seen = []
    for _, texts, domain in CORPUS:
        for t in texts:
            if (t, domain) not in seen:
                seen.append((t, domain))
    return seen


# 1 ------------------------------------------------------------------------------------------------

def test_single_function_pizzas_match_exactly(report):
    expected = {
        "x^2+y^4": [(Segment(2, 4), AffineMap(F(1, 2), 0))],
        "x": [(Segment(1, INFINITY), AffineMap(1, 0))],
        "x^3-y^2": [(Segment(3, INFINITY), AffineMap(1, F(-3, 2))),
                    (Segment(INFINITY, 3), AffineMap(1, F(-3, 2))),
                    (Segment(3, 2), AffineMap(F(1, 2), 0))],
    }
    problems = []
    for text, want in expected.items():
        start = time.perf_counter()
        got = rows(compute_pizza(P(text)))
        elapsed = time.perf_counter() - start
        if got != want:
            problems.append(f"{text}: {got}")
        if elapsed >= 1.0:
            problems.append(f"{text}: {elapsed:.2f}s")
    assert report(1, "pizzas of x^2+y^4, x, x^3-y^2", not problems, "; ".join(problems))


# 2 ------------------------------------------------------------------------------------------------

def test_triple_multipizza(report):
    # 4 slices, not 3: merging the last two would need support at the y-axis
    # (x^2+y^4, x) and at the cusp-side arc (x^3-y^2) at once, and a slice
    # has a single supporting side.  Exponents 3/2, 3/2, 1, 1.
    fs = [P("x^2+y^4"), P("x"), P("x^3-y^2")]
    M = build_multipizza(fs)
    A = abstract_multipizza(M)
    problems = []
    if A.betas != (F(3, 2), F(3, 2), F(1), F(1)):
        problems.append(f"betas {A.betas}")
    invalid = validate_multipizza(M)
    if invalid:
        problems.append("; ".join(invalid))
    for nu, f in enumerate(fs):
        if abstract_multipizza(project(M, nu)) != abstract_pizza(compute_pizza(f)):
            problems.append(f"column {nu + 1} does not project to its pizza")
    rng = random.Random(2)
    for _ in range(RANDOM_CHOICES):
        B = abstract_multipizza(build_multipizza(fs, chooser=random_chooser(rng)))
        if not combinatorial_equiv(A, B, allow_reversal=False).equivalent:
            problems.append("random representatives changed the answer")
            break
    assert report(2, "multipizza of {x^2+y^4, x, x^3-y^2}", not problems,
                  "; ".join(problems) or "4 slices, valid, projects, choice-independent")


# 3 ------------------------------------------------------------------------------------------------

def test_paired_cusps_decision(report):
    fs, gs = [P("x^2-y^3"), P("y")], [P("x^3-y^2"), P("y")]
    start = time.perf_counter()
    lines, ok = [], True
    for label, reversal in (("default", True), ("oriented", False)):
        cert = decide_multiK(fs, gs, allow_reversal=reversal)
        clause = cert.failure.clause if cert.failure else None
        columns = [decide_multiK([f], [g], allow_reversal=reversal).equivalent for f, g in zip(fs, gs)]
        good = (not cert.equivalent) and clause == "ii" and all(columns)
        ok &= good
        lines.append(f"{label}: {cert.verdict.value} clause {clause}, columns {columns}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 2.0
    lines.append(f"{elapsed:.2f}s")
    assert report(3, "{x^2-y^3, y} vs {x^3-y^2, y}", ok, "; ".join(lines))


# 4 ------------------------------------------------------------------------------------------------

def test_random_choices_give_equivalent_multipizzas(report):
    assert len(CORPUS) >= 20
    failures = []
    for entry in CORPUS:
        fs, domain = germs(entry)
        rng = random.Random(entry[0])
        seen = [abstract_multipizza(build_multipizza(fs, domain))]
        for _ in range(RANDOM_CHOICES):
            B = abstract_multipizza(build_multipizza(fs, domain, random_chooser(rng)))
            if B not in seen:
                seen.append(B)
        for i, a in enumerate(seen):
            for b in seen[i + 1:]:
                if not combinatorial_equiv(a, b, allow_reversal=False).equivalent:
                    failures.append(entry[0])
    assert report(4, f"{RANDOM_CHOICES} random choices on {len(CORPUS)} multigerms", not failures,
                  ", ".join(sorted(set(failures))))


# 5 ------------------------------------------------------------------------------------------------

def _width_law_problems(M, L, fs, where):
    out = []
    for i, s in enumerate(M.slices):
        anchor = s.right_arc if s.support == RIGHT else s.left_arc
        attained = set()
        for nu, (f, c) in enumerate(zip(fs, s.columns)):
            tag = f"{where} slice {i} column {nu}"
            if c.Q.is_point:
                continue
            ends = [q for q in (c.Q.a, c.Q.b) if q is not INFINITY]
            if any(affine_eval(c.mu, q) > q for q in ends) or (INFINITY in (c.Q.a, c.Q.b) and c.mu.slope > 1):
                out.append(f"{tag}: width above q")
            va, vb = width_at(c.mu, c.Q.a), width_at(c.mu, c.Q.b)
            low_end = "a" if vb is INFINITY or (va is not INFINITY and va < vb) else "b"
            if min(v for v in (va, vb) if v is not INFINITY) != s.beta:
                out.append(f"{tag}: min width is not beta")
            attained.add(low_end)
            # three-point certification: both ends plus interior samples realize the affine width
            for q in interior_values(c.Q, 3):
                g = arc_at_contact(L, s, anchor, affine_eval(c.mu, q))
                if ord_along(f, g) != q:
                    out.append(f"{tag}: width not affine at q={q}")
        if len(attained) > 1:
            out.append(f"{where} slice {i}: beta attained at different ends")
        expected_end = {LEFT: "b", RIGHT: "a"}.get(s.support)
        if attained and expected_end and attained != {expected_end}:
            out.append(f"{where} slice {i}: support side inconsistent with the beta end")
    out.extend(f"{where}: {line}" for line in validate_multipizza(M))
    return out


def test_width_laws_hold_on_the_corpus(report):
    problems, slices = [], 0
    for entry in CORPUS:
        fs, domain = germs(entry)
        M = build_multipizza(fs, domain)
        slices += len(M.slices)
        problems += _width_law_problems(M, layout(domain, fs), fs, entry[0])
    for text, domain in single_germs():
        f = P(text)
        pizza = compute_pizza(f, domain)
        slices += len(pizza.slices)
        problems += _width_law_problems(pizza, layout(domain, [f]), [f], text)
    assert report(5, f"width laws on {slices} slices", not problems, "; ".join(problems[:5]))


# 6 ------------------------------------------------------------------------------------------------

def test_intersections_have_the_larger_order(report, monkeypatch):
    seen = []
    original = multipizza_module.intersect_zones

    def recording(Z1, Z2):
        both = original(Z1, Z2)
        if both is not None:
            seen.append((Z1, Z2, both))
        return both

    monkeypatch.setattr(multipizza_module, "intersect_zones", recording)
    for entry in CORPUS:
        fs, domain = germs(entry)
        build_multipizza(fs, domain)
    bad = [(a, b, c) for a, b, c in seen if zone_order(c) != max(zone_order(a), zone_order(b))]
    assert report(6, f"{len(seen)} intersecting zone pairs", seen and not bad,
                  f"{len(bad)} with the wrong order")


# 7 ------------------------------------------------------------------------------------------------

def test_oracle_agrees_on_the_corpus(report):
    plan = SamplePlan(tolerance=0.05)
    start = time.perf_counter()
    total, failures = 0, []
    for entry in CORPUS:
        fs, domain = germs(entry)
        result = verify_pizza(build_multipizza(fs, domain), fs, plan, samples_per_slice=5)
        total += len(result.checks)
        failures += [(entry[0], c.to_json()) for c in result.exceedances]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    assert report(7, f"{total} numerical checks", ok, f"{len(failures)} exceedances, {elapsed:.1f}s")


# 8 ------------------------------------------------------------------------------------------------

def _swap_arc(a):
    return PuiseuxArc(X_OF_Y if a.chart == Y_OF_X else Y_OF_X, a.terms, a.trunc, a.sector[::-1])


def _swapped_domain(domain):
    if domain.kind is DomainKind.TRIANGLE:
        # the swap reverses orientation: the image of the right side becomes the left one
        return DomainSpec.triangle(_swap_arc(domain.right), _swap_arc(domain.left))
    return domain


def test_swapping_variables_reverses_the_pizza(report):
    failures = []
    for text, domain in single_germs():
        f = P(text)
        A = abstract_pizza(compute_pizza(f, domain))
        B = abstract_pizza(compute_pizza(f.swap(), _swapped_domain(domain))).reversed()
        offsets = range(len(B.slices)) if B.cyclic else [0]
        if not any(first_failure(A, B.rotated(k)) is None for k in offsets):
            failures.append(f"{text}@{domain.kind.value}")
    assert report(8, f"swap test on {len(single_germs())} germs", not failures, ", ".join(failures))
