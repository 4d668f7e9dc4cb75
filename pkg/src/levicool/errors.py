"""Exception hierarchy shared by the physics modules and the command line runner."""

from __future__ import annotations

from typing import Any


class LevicoolError(Exception):
    """Base class for every error raised by the package.

    ``context`` collects locating information (field names, grid coordinates,
    step indices) as the error travels outwards.
    """

    exit_code: int = 1

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context: dict[str, Any] = dict(context)

    def with_context(self, **context: Any) -> "LevicoolError":
        self.context.update(context)
        return self

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class ParameterError(LevicoolError, ValueError):
    """Raised when an input parameter is non-finite or out of range."""

    exit_code = 2

    def __init__(self, message: str, *, field: str | None = None, **context: Any) -> None:
        if field is not None:
            context.setdefault("field", field)
        super().__init__(message, **context)
        self.field = field


class MeasurementOff(ParameterError):
    """Raised when a measurement record is requested while eta * kappa_s is zero."""


class LambDickeViolation(ParameterError):
    """Raised when the linearised standing-wave signal is used outside k_L x < 0.1."""


class NumericalError(LevicoolError, RuntimeError):
    """Raised when an integrator or solver produces an untrustworthy result."""

    exit_code = 3


class IntegratorBlowup(NumericalError):
    """Raised when a Gaussian state leaves its admissible region; dt is too large."""


class SingularSystem(NumericalError):
    """Raised when the excess-variance linear system cannot be solved."""


class TruncationLeak(NumericalError):
    """Raised when the Fock truncation holds too much population near its top."""


class PositivityLoss(NumericalError):
    """Raised when a density matrix develops a significantly negative eigenvalue."""


__all__ = [
    "IntegratorBlowup",
    "LambDickeViolation",
    "LevicoolError",
    "MeasurementOff",
    "NumericalError",
    "ParameterError",
    "PositivityLoss",
    "SingularSystem",
    "TruncationLeak",
]
