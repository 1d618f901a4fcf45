"""Exception and warning classes raised by the evaluators and checks."""


class OscsymError(Exception):
    """Base class for all library errors."""


class DomainError(OscsymError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionExhausted(OscsymError, ArithmeticError):
    """Cancellation would consume more bits than the working precision has."""


class Underresolved(OscsymError, ArithmeticError):
    """A truncated series is too short for the requested argument."""


class SingularPoint(OscsymError, ArithmeticError):
    """The derivative recurrence was asked to run at t = 0."""


class GapError(OscsymError, ArithmeticError):
    """No evaluation route reaches the requested accuracy."""


class RepOverflow(OscsymError, ValueError):
    """Multi-index too large for the radial derivative representation."""


class InsufficientSignal(OscsymError, ArithmeticError):
    """Too few remainder samples rise above the reference noise floor."""


class NonConvergent(OscsymError, ArithmeticError):
    """An extrapolation ladder failed to settle."""

    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw


class Stiffness(OscsymError, ArithmeticError):
    """Adaptive step size collapsed below its floor."""


class TailBoundLoose(OscsymError, ArithmeticError):
    """A quadrature tail estimate exceeds the requested tolerance."""


class DivergenceFloor(UserWarning):
    """Asymptotic truncation is past its smallest term."""


class SlowConvergence(UserWarning):
    """A series converges too slowly to reach full precision."""
