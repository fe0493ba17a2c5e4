"""Exception types shared across the package."""


class QuadratureError(Exception):
    """Base class for numerical and validation failures raised by this package."""


class PoleOnIntervalError(QuadratureError):
    """A denominator polynomial vanishes on or too close to the parameter interval."""


class ConditioningError(QuadratureError):
    """A basis conversion was refused because it would lose too much precision."""


class DegeneratePolynomialError(QuadratureError):
    """A polynomial is constant (or numerically so) where roots were required."""


class RuleConstructionError(QuadratureError):
    """A quadrature rule failed its exactness verification.

    Attributes:
        worst_residual: largest relative residual observed, when available.
    """

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class RegionValidationError(QuadratureError):
    """A region file or region object violates the boundary-model contract."""


class UnsupportedInputError(QuadratureError):
    """Input is syntactically valid but outside the supported feature set."""


class DegenerateLoopError(QuadratureError):
    """A boundary loop encloses (numerically) zero area."""


class EvaluationError(QuadratureError):
    """An integrand produced a non-finite value at a quadrature node."""


class FitFailureError(QuadratureError):
    """Moment fitting could not reach the required residual.

    Attributes:
        residual: the achieved absolute residual norm.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class BoundaryProximityError(QuadratureError):
    """A query point lies too close to a boundary curve for a robust inside test."""


class ExpressionError(ValueError):
    """Integrand expression could not be parsed.

    Attributes:
        offset: byte offset of the offending token in the source text.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset
