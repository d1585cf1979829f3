from typing import Optional


class MultspecError(Exception):
    """Base error for multspec computations."""


class DomainError(MultspecError, ValueError):
    """Input outside the domain of an operation."""


class ArgumentError(MultspecError, ValueError):
    """Malformed argument list."""


class EvaluationError(MultspecError):
    """Non-finite value met while integrating or sampling."""

    def __init__(self, message: str, node: Optional[complex] = None) -> None:
        super().__init__(message)
        self.node = node


class OnCurveError(MultspecError):
    """The query point lies on the curve, so no winding number exists."""

    def __init__(self, message: str, distance: float = 0.0) -> None:
        super().__init__(message)
        self.distance = distance


class ParseError(MultspecError, ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


class SymbolConstructionError(MultspecError, ValueError):
    """A symbol violates its construction invariants."""

    def __init__(self, message: str, witness: Optional[complex] = None) -> None:
        super().__init__(message)
        self.witness = witness


class NotAZeroError(MultspecError, ValueError):
    def __init__(self, message: str, residual: float) -> None:
        super().__init__(message)
        self.residual = residual


class LowerBoundError(MultspecError, ValueError):
    def __init__(self, message: str, point: complex) -> None:
        super().__init__(message)
        self.point = point


class BoundaryZeroError(MultspecError):
    """u − λ (nearly) vanishes on the unit circle."""

    def __init__(self, message: str, angle: float, modulus: float) -> None:
        super().__init__(message)
        self.angle = angle
        self.modulus = modulus


class ConsistencyError(MultspecError):
    """Two independent computations of the same quantity disagree."""


class SpecError(MultspecError, ValueError):
    """Invalid or unsupported function-space specification."""


class HypothesisError(MultspecError):
    """No implemented theorem covers the requested input."""

    def __init__(self, message: str, theorem: str) -> None:
        super().__init__(message)
        self.theorem = theorem
