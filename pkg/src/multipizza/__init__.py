"""Pizzas and multipizzas: complete Lipschitz contact invariants of real plane function germs."""

from .abstract import (AbstractMultipizza, AbstractPizza, EquivalenceCertificate, Verdict,
                       combinatorial_equiv)
from .domain import DomainKind, DomainSpec
from .errors import (CoefficientFieldFailure, InputError, InternalValidationFailure,
                     MultipizzaError, NonGermError, PolynomialSyntaxError)
from .multipizza import (Multipizza, abstract_multipizza, build_multipizza, decide_multiK,
                         fine_multipizza, project, validate_multipizza)
from .pizza import Pizza, abstract_pizza, compute_pizza, minimize, validate_pizza
from .puiseux import PuiseuxArc, Polynomial, parse_polynomial
from .scalars import INFINITY, AffineMap, Segment
from .zones import ZoneDescriptor, intersect_zones, perfect_zones, representative_arc, zone_membership

__version__ = "0.1.0"

__all__ = [
    "AbstractMultipizza", "AbstractPizza", "AffineMap", "CoefficientFieldFailure", "DomainKind",
    "DomainSpec", "EquivalenceCertificate", "INFINITY", "InputError", "InternalValidationFailure",
    "Multipizza", "MultipizzaError", "NonGermError", "Pizza", "Polynomial", "PolynomialSyntaxError",
    "PuiseuxArc", "Segment", "Verdict", "ZoneDescriptor", "abstract_multipizza", "abstract_pizza",
    "build_multipizza", "combinatorial_equiv", "compute_pizza", "decide_multiK", "fine_multipizza",
    "intersect_zones", "minimize", "parse_polynomial", "perfect_zones", "project",
    "representative_arc", "validate_multipizza", "validate_pizza", "zone_membership",
]
