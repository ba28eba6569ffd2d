"""
Error Types for the RMT Lab

Two families: validation failures (bad input, unsupported sizes or orders)
and numerical failures (non-convergence, collisions, degenerate spectra).
The command line maps the first family to exit code 2 and the second to 3.
"""

from typing import Any, Dict, List, Optional


class RmtLabError(Exception):
    """Base class for every error raised by the lab."""

    exit_code = 1

    def to_dict(self) -> Dict[str, Any]:
        """
        Machine-readable form of the error.

        Returns:
            Dictionary with error class, message and exit code
        """
        return {
            "error": type(self).__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        }


class ValidationFailure(RmtLabError):
    """Input rejected before any numerical work."""

    exit_code = 2


class NumericalFailure(RmtLabError):
    """A numerical procedure failed on valid input."""

    exit_code = 3


class InvalidArgumentError(ValidationFailure, ValueError):
    pass


class UnsupportedError(ValidationFailure):
    pass


class UnsupportedOrderError(UnsupportedError):
    pass


class OverflowGuardError(ValidationFailure):
    pass


class TruncationError(ValidationFailure):
    pass


class EdgeDegenerateError(ValidationFailure):
    pass


class SingularPointError(ValidationFailure):
    pass


class StencilError(ValidationFailure):
    pass


class KappaUndefinedError(ValidationFailure):
    pass


class InsufficientResolutionError(ValidationFailure):
    pass


class DegenerateSpectrumError(NumericalFailure):
    pass


class SingularConfigurationError(NumericalFailure):
    pass


class NoConvergenceError(NumericalFailure):
    """Iteration stopped before reaching its tolerance."""

    def __init__(self, message: str, estimates: Optional[List[Any]] = None, best: Any = None):
        super().__init__(message)
        self.estimates = list(estimates) if estimates is not None else []
        self.best = best

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["estimates"] = [_jsonable(e) for e in self.estimates]
        if self.best is not None:
            data["best"] = _jsonable(self.best)
        return data


class CollisionAbortError(NumericalFailure):
    """Particle ordering could not be kept after the allowed step halvings."""

    def __init__(self, message: str, state: Any = None):
        super().__init__(message)
        self.state = state

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        if self.state is not None:
            data["t"] = float(self.state.t)
        return data


class SolverFailureError(NumericalFailure):
    """Descent solver could not make progress."""

    def __init__(self, message: str, trace: Optional[List[float]] = None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["trace_tail"] = [float(v) for v in self.trace[-10:]]
        return data


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)
