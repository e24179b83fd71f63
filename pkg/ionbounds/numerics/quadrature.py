from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List

from scipy.integrate import quad

from ..utils.errors import QuadratureError

logger = logging.getLogger(__name__)

Integrand = Callable[[float], float]

# a result flagged for roundoff or slow convergence is kept while its error stays within this factor of the tolerance
ROUNDOFF_SLACK = 1e4

_TOLERATED_FLAGS = ("roundoff", "divergent")


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_panels: int = 10_000


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            evaluations=self.evaluations + other.evaluations,
        )


_EMPTY = QuadratureResult(value=0.0, error_estimate=0.0, evaluations=0)


def _check_tolerances(abs_tol: float, rel_tol: float) -> None:
    if not (abs_tol > 0.0 and rel_tol > 0.0):
        raise ValueError(f"Tolerances must be positive, got abs_tol={abs_tol}, rel_tol={rel_tol}")


def _pieces(lo: float, hi: float, breakpoints: Iterable[float]) -> List[float]:
    inner = sorted({float(p) for p in breakpoints if lo < p < hi})
    return [lo, *inner, hi]


def _acceptable(message: str, value: float, error: float, abs_tol: float, rel_tol: float) -> bool:
    """Whether a result QUADPACK flagged is still usable.

    The roundoff and slow-convergence flags (ier 2, 4 and 5) fire when the
    tolerance sits at machine precision, typically for integrals close to
    zero. An exhausted panel budget or bad integrand behaviour always fails.
    """
    text = message.lower()
    if not any(flag in text for flag in _TOLERATED_FLAGS):
        return False
    return error <= ROUNDOFF_SLACK * max(abs_tol, rel_tol * abs(value))


def _integrate_piece(
    f: Integrand,
    lo: float,
    hi: float,
    abs_tol: float,
    rel_tol: float,
    max_panels: int,
) -> QuadratureResult:
    # QUADPACK QAGS: adaptive bisection with the 21-point Gauss-Kronrod rule per panel
    out = quad(f, lo, hi, epsabs=abs_tol, epsrel=rel_tol, limit=max_panels, full_output=1)
    value, error, info = out[0], out[1], out[2]
    evaluations = int(info.get("neval", 0))
    if len(out) > 3:
        if not _acceptable(out[3], float(value), float(error), abs_tol, rel_tol):
            raise QuadratureError(
                f"Quadrature on [{lo:.6g}, {hi:.6g}] did not converge: {out[3]}",
                best_estimate=float(value),
                error_estimate=float(error),
                evaluations=evaluations,
            )
        logger.debug("piece [%.6g, %.6g]: flagged, kept with error %.3e", lo, hi, error)
    logger.debug("piece [%.6g, %.6g]: %d panels, %d evaluations", lo, hi, info.get("last", 0), evaluations)
    return QuadratureResult(value=float(value), error_estimate=float(error), evaluations=evaluations)


def integrate(
    f: Integrand,
    lo: float,
    hi: float,
    abs_tol: float = DEFAULT_SETTINGS.abs_tol,
    rel_tol: float = DEFAULT_SETTINGS.rel_tol,
    breakpoints: Iterable[float] = (),
    max_panels: int = DEFAULT_SETTINGS.max_panels,
) -> QuadratureResult:
    """Integrate ``f`` over ``[lo, hi]``, one adaptive pass per smooth piece.

    ``breakpoints`` mark interior kinks or jumps of ``f``; each piece between
    consecutive breakpoints is integrated separately. Raises
    ``QuadratureError`` (carrying the best estimate) when a piece exhausts the
    panel budget, or reports roundoff with an error estimate more than
    ``ROUNDOFF_SLACK`` times the requested tolerance.
    """
    _check_tolerances(abs_tol, rel_tol)
    lo, hi = float(lo), float(hi)
    if lo > hi:
        raise ValueError(f"Integration bounds out of order: lo={lo} > hi={hi}")
    if lo == hi:
        return _EMPTY

    edges = _pieces(lo, hi, breakpoints)
    total = _EMPTY
    for a, b in zip(edges[:-1], edges[1:]):
        try:
            total = total + _integrate_piece(f, a, b, abs_tol, rel_tol, max_panels)
        except QuadratureError as exc:
            raise QuadratureError(
                str(exc),
                best_estimate=total.value + exc.best_estimate,
                error_estimate=total.error_estimate + exc.error_estimate,
                evaluations=total.evaluations + exc.evaluations,
            ) from exc
    return total


def integrate_semi_infinite(
    f: Integrand,
    lo: float,
    decay_rate: float,
    abs_tol: float = DEFAULT_SETTINGS.abs_tol,
    rel_tol: float = DEFAULT_SETTINGS.rel_tol,
    breakpoints: Iterable[float] = (),
    max_panels: int = DEFAULT_SETTINGS.max_panels,
) -> QuadratureResult:
    """Integrate ``f`` over ``[lo, inf)``.

    Uses r = lo - ln(u) / decay_rate, which maps ``[lo, inf)`` onto ``(0, 1]``.
    ``f(r) * exp(decay_rate * r)`` must stay bounded, so pass a rate no larger
    than the true decay of the integrand.
    """
    if not decay_rate > 0.0:
        raise ValueError(f"decay_rate must be positive, got {decay_rate}")
    lo = float(lo)
    k = float(decay_rate)

    def mapped(u: float) -> float:
        if u <= 0.0:
            return 0.0
        return float(f(lo - math.log(u) / k)) / (k * u)

    mapped_breaks = [math.exp(-k * (float(r) - lo)) for r in breakpoints if r > lo]
    return integrate(mapped, 0.0, 1.0, abs_tol, rel_tol, breakpoints=mapped_breaks, max_panels=max_panels)
