"""Exception types raised by the solver."""


class SolverError(Exception):
    """Base class for all package-specific errors."""


class NonPositiveEnergy(SolverError):
    """The shifted free energy came out non-positive; the energy constant c0 is too small."""


class InvalidState(SolverError):
    """A state quantity violates a precondition (e.g. energy <= 0 in an auxiliary update)."""


class Diverged(SolverError):
    """A time step produced non-finite values or exceeded the overflow guard.

    Raised by the baseline integrators, which are only conditionally stable.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class GridTooCoarse(SolverError):
    """The grid cannot represent the requested band-limited data without aliasing."""


class InsufficientData(SolverError):
    """Not enough samples to perform the requested fit."""


class ParseError(SolverError):
    """The configuration document is not syntactically valid."""


class ValidationError(SolverError):
    """A configuration value violates a constraint. ``field`` names the offender."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
