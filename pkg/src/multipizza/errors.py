"""Exception types shared across the package."""


class MultipizzaError(Exception):
    """Base class for all errors raised by this package."""


class EvalAtInfinity(MultipizzaError):
    pass


class SegmentNotContained(MultipizzaError):
    pass


class PolynomialSyntaxError(MultipizzaError):
    """Malformed polynomial text. Carries the offending position."""

    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class NonGermError(MultipizzaError):
    pass


class ZeroPolynomial(MultipizzaError):
    pass


class CoefficientFieldFailure(MultipizzaError):
    """An algebraic (in)equality could not be certified within the budget."""


class UndecidedCoefficientEquality(CoefficientFieldFailure):
    pass


class TruncationTooShallow(MultipizzaError):
    pass


class EmptyRegion(MultipizzaError):
    pass


class InternalValidationFailure(MultipizzaError):
    pass


class InputError(MultipizzaError):
    """Invalid user input (file contents, flags, domain descriptors)."""
