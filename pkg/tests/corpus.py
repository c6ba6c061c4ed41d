"""Multigerms shared by the property suites and the acceptance run."""

from fractions import Fraction

from multipizza.domain import DomainSpec
from multipizza.puiseux.arcs import Y_OF_X, PuiseuxArc
from multipizza.puiseux.polynomial import parse_polynomial

QUADRANT = DomainSpec.quadrant()
PLANE = DomainSpec.plane()
# the Hölder triangle between the x-axis and the diagonal
NARROW = DomainSpec.triangle(PuiseuxArc(Y_OF_X, ()),
                             PuiseuxArc(Y_OF_X, ((Fraction(1), Fraction(1)),)))

CORPUS = [
    ("triple_of_three_germs", ["x^2+y^4", "x", "x^3-y^2"], QUADRANT),
    ("cusp_pair_f", ["x^2-y^3", "y"], QUADRANT),
    ("cusp_pair_g", ["x^3-y^2", "y"], QUADRANT),
    ("linear", ["x"], QUADRANT),
    ("even_powers", ["x^2+y^4"], QUADRANT),
    ("cusp", ["x^3-y^2"], QUADRANT),
    ("two_cusps", ["(y^2-2*x^3)*(y^3-3*x^4)"], QUADRANT),
    ("nested_parabolas", ["(y-x^2)*(y-2*x^2)", "x"], QUADRANT),
    ("cusp_and_parabola", ["(y^2-x^3)*(y-x^2)", "y^3-x^5"], QUADRANT),
    ("high_contact", ["(y^5-x^3)*(y-3*x^4)"], QUADRANT),
    ("mixed_exponents", ["y^2-x^5", "y^4-2*x^3"], QUADRANT),
    ("axes_and_diagonal", ["x*y", "x^2-y^2"], QUADRANT),
    ("double_line", ["(y-x)^2", "x^2+y^2"], QUADRANT),
    ("irrational_slope", ["y^2-2*x^2", "x^3-y^2"], QUADRANT),
    ("lazy_root", ["y^2-x^3-x^4", "y-x^2"], QUADRANT),
    ("duplicate", ["x^3-y^2", "x^3-y^2"], QUADRANT),
    ("three_parabolas", ["(y-x^2)*(y-2*x^2)*(y-3*x^2)"], QUADRANT),
    ("swapped_factors", ["(x^2-3*y^5)*(y-x^2)", "x^4-y^3"], QUADRANT),
    ("plane_lines", ["x*y*(x-y)"], PLANE),
    ("plane_cusp_pair", ["x^3-y^2", "y"], PLANE),
    ("plane_two_cusps", ["(y^2-2*x^3)*(y^3-3*x^4)"], PLANE),
    ("plane_definite", ["x^2+y^2", "x"], PLANE),
    ("plane_quintic", ["y^5-x^3*y-x^7"], PLANE),
    ("plane_products", ["(y^4-x)*(y^2-x^2)", "y^3-x^4"], PLANE),
    ("triangle_cusp", ["x^3-y^2"], NARROW),
    ("triangle_pair", ["y^2-2*x^3", "x^2-y^5"], NARROW),
]


def germs(entry):
    name, texts, domain = entry
    return [parse_polynomial(t) for t in texts], domain


def corpus_ids():
    return [name for name, _, _ in CORPUS]


def single_germs():
    """Every distinct function of the corpus, with the domains it appears on."""
    seen = {}
    for _, texts, domain in CORPUS:
        for t in texts:
            seen.setdefault(t, set()).add(domain.kind.value)
    return sorted(seen.items())
