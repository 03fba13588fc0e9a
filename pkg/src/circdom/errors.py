"""Exception hierarchy.

Every error carries a machine-parsable ``name`` (the class name) which the
CLI prints on standard error.  Validation errors map to exit code 2,
numerical failures to exit code 3.
"""


class CircdomError(Exception):
    """Base class for all library errors."""

    exit_code = 3

    @property
    def name(self):
        return type(self).__name__


class ValidationError(CircdomError):
    exit_code = 2


class NumericalError(CircdomError):
    exit_code = 3


class DomainValidationError(ValidationError):
    """Raised by :func:`circdom.geometry.validate_domain`.

    ``violations`` lists every violated invariant as ``(kind, indices)``
    where ``indices`` are hole indices (1-based; 0 names the outer disk).
    """

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(f"{kind}{tuple(idx)}" for kind, idx in self.violations)
        super().__init__(text)


class HoleOverlap(DomainValidationError):
    pass


class HoleTouchesOuter(DomainValidationError):
    pass


class HoleOutsideOuter(DomainValidationError):
    pass


class InvalidInput(ValidationError):
    """Malformed JSON payload or argument."""


class ZeroOutsideDomain(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class IdenticallyZero(ValidationError):
    pass


class EvalAtPole(NumericalError):
    pass


class PoleOnBoundary(NumericalError):
    pass


class PoleOnContour(NumericalError):
    pass


class DegreeOverflow(NumericalError):
    pass


class TruncationFailure(NumericalError):
    pass


class ZeroNearContour(NumericalError):
    pass


class NonIntegerWinding(NumericalError):
    pass


class MomentRecoveryFailure(NumericalError):
    pass


class ZeroOnBoundary(NumericalError):
    pass


class PhaseUnwrapInconsistent(NumericalError):
    pass


class AmbiguousSign(NumericalError):
    pass


class NotUnimodular(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class BudgetExceeded(NumericalError):
    pass
