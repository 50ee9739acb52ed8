"""This module contains the exit codes and the exceptions raised by fracpk."""

from enum import IntEnum
from typing import Optional


class ExitCode(IntEnum):
    """Class with predefined process exit codes."""

    ok = 0
    config = 2
    numerical = 3
    infeasible = 4


class FracPKError(Exception):
    """Base class for every error fracpk reports to the user."""

    exit_code = ExitCode.numerical

    def to_dict(self) -> dict[str, object]:
        """Machine-readable form written to error.json."""
        return {
            "error": type(self).__name__,
            "message": str(self),
            "exit_code": int(self.exit_code),
        }


class ConfigError(FracPKError, ValueError):
    """Invalid configuration, flag or out-of-domain argument."""

    exit_code = ExitCode.config


class NumericalError(FracPKError):
    """A numerical procedure failed."""

    exit_code = ExitCode.numerical


class ConvergenceError(NumericalError):
    """An iteration or series hit its cap before reaching tolerance."""


class DivergenceError(NumericalError):
    """A simulation produced non-finite values."""


class DegenerateApproximationError(NumericalError):
    """A rational approximation could not be constructed from the data."""


class SolverRefusedError(NumericalError):
    """A solver declined a problem outside its working range."""


class InversionError(NumericalError):
    """Numerical Laplace inversion failed at a time point."""

    def __init__(self, message: str, t: Optional[float] = None) -> None:
        """Keep the failing time stamp next to the message."""
        super().__init__(message if t is None else f"{message} (t={t!r})")
        self.t = t


class InfeasibleProblemError(FracPKError):
    """The dosing QP has no point satisfying its constraints."""

    exit_code = ExitCode.infeasible
