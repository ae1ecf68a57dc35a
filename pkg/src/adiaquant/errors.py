"""Exception types shared across the package.

The CLI maps these onto exit codes: parse errors 3, capacity errors 4,
numerical failures 5.
"""


class AdiaquantError(Exception):
    """Base class for all package errors."""


class ClauseError(AdiaquantError):
    """A clause references bits outside 1..n or is otherwise malformed."""


class ParseError(AdiaquantError):
    """Instance or gate file text is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapacityError(AdiaquantError):
    """Requested bit count exceeds the configured dimension cap."""


class DimensionError(AdiaquantError):
    """Operator and state dimensions do not agree."""


class DecompositionError(AdiaquantError):
    """The instance cannot be split into few-bit local terms."""


class UnsatisfiableError(AdiaquantError):
    """No satisfying assignment exists where one is required."""


class SectorError(AdiaquantError):
    """Requested symmetry sector does not commute with the operators."""


class ConvergenceError(AdiaquantError):
    """Eigensolver failed to reach the requested residual."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class NormDriftError(AdiaquantError):
    """Integrator norm drift exceeded the configured bound."""


class StateError(AdiaquantError):
    """State vector is not normalized."""


class GapZeroError(AdiaquantError):
    """Adiabatic time estimate is undefined for a vanishing gap."""
