from __future__ import annotations

from typing import Optional


class IonBoundsError(Exception):
    """Base class for every failure raised by ionbounds."""


class QuadratureError(IonBoundsError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    The best estimate is kept so callers can decide whether it is usable.
    """

    def __init__(self, message: str, best_estimate: float, error_estimate: float, evaluations: int) -> None:
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class DistributionalPulseError(IonBoundsError, ValueError):
    pass


class ConsistencyError(IonBoundsError):
    """Two formulas for the same quantity disagree beyond tolerance."""


class OptimizationError(IonBoundsError):
    pass


class KernelSingularityError(IonBoundsError, ValueError):
    pass


class GridTruncationError(IonBoundsError):
    pass


class ConfigError(IonBoundsError, ValueError):
    """Invalid run or pulse configuration, with the offending location."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ) -> None:
        self.path = path
        self.line = line
        self.field = field
        where = []
        if path:
            where.append(path)
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{': '.join([', '.join(where), message]) if where else message}")
