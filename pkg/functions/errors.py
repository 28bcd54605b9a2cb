from typing import Optional


class ErrLabError(Exception):
    """Base class for every error raised by the error-rate lab."""


class DomainError(ErrLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(ErrLabError, ValueError):
    """A sweep configuration is malformed. `flag` names the offending option."""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(f"{flag}: {message}" if flag else message)
        self.flag = flag


class NumericError(ErrLabError, ArithmeticError):
    """Quadrature did not reach the requested tolerance, or a value is unusable."""

    def __init__(self, message: str, estimate: Optional[float] = None, abs_error: Optional[float] = None):
        detail = message
        if estimate is not None:
            detail += f" (estimate={estimate:.6e}"
            if abs_error is not None:
                detail += f", abs_error={abs_error:.3e}"
            detail += ")"
        super().__init__(detail)
        self.estimate = estimate
        self.abs_error = abs_error
