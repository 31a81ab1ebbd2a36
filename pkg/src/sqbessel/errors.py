"""Exception and warning classes raised across the package."""


class SqBesselError(Exception):
    """Base class for all errors raised by sqbessel."""


class PoleError(SqBesselError, ValueError):
    """Argument sits on a pole (non-positive integer for gamma/digamma)."""


class ConvergenceError(SqBesselError, ArithmeticError):
    """A series did not reach its tolerance within the term budget."""


class QuadratureError(SqBesselError, ArithmeticError):
    """An adaptive rule could not meet its tolerance."""


class DomainError(SqBesselError, ValueError):
    """Argument outside the domain of the operation (or non-finite sample)."""


class ContourError(DomainError):
    """Contour abscissa outside the admissible strip."""


class StripError(DomainError):
    """Mellin variable outside the declared convergence strip."""


class NormError(SqBesselError, ArithmeticError):
    """A weighted norm required by a transform is numerically infinite."""


class IntegrabilityError(SqBesselError, ArithmeticError):
    """An integrability precondition of an inversion formula fails."""


class SchemaError(SqBesselError, ValueError):
    """Input file does not match the SampledFunction schema."""


class TruncationWarning(UserWarning):
    """A truncated integral still carries non-negligible mass at the cut."""
