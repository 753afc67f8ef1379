"""Exception types raised by the solvers."""


class GravBoseError(Exception):
    """Base class for all solver errors."""


class DomainError(GravBoseError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericError(GravBoseError, ArithmeticError):
    """A quadrature or field evaluation produced a non-finite value."""


class IntegrationDiverged(NumericError):
    """The radial integrator hit a non-finite state.

    ``radius`` is the last radius at which the state was still finite.
    """

    def __init__(self, radius: float, message: str | None = None):
        self.radius = float(radius)
        super().__init__(message or f"integration diverged after r = {radius:.6g}")


class ConvergenceError(GravBoseError):
    """A shooting bracket or fixed-point iteration failed to converge."""

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (last residual {residual:.3e})"
        super().__init__(message)


class ResolutionError(GravBoseError):
    """The grid is too short or too coarse to resolve the requested feature."""


class DegenerateFieldError(NumericError):
    """A Rayleigh-type quotient has a vanishing denominator."""


class TrivialFixedPointError(ConvergenceError):
    """The ring iteration collapsed onto the zero field."""


class IterationDiverged(NumericError):
    """A fixed-point update produced a non-finite field."""
