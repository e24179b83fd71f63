"""Upper and lower bounds on the ionization probability of a bound state.

Each bound is the square of an amplitude assembled from a few named terms:

    upper1 = (T1 + |c| ||p_z psi|| + |b| ||p_z psi|| / (-E - b^2/2))^2     if b^2/2 < -E
    upper2 = (T1 + |c| ||p_z psi|| + |b| ||z psi||)^2
    lower  = 1 - (T1 + s(c) / (E + b^2/2) + |b| ||p_z psi|| / (E + b^2/2))^2   if b^2/2 > -E
    pfeifer = (int |E| dt)^2 ||z psi||^2
    pert1   = b^2 ||z psi||^2

with b, c taken at the end of the pulse, s(c) the shifted-potential norm
||(V(x - c e_z) - V) psi|| and T1 = int_0^tau s(c(t)) dt.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Tuple

from ..atom.hydrogen import (
    GROUND_STATE,
    Exactness,
    HydrogenState,
    MatrixElementValue,
    pz_norm_sq,
    shift_difference_norm,
    z_norm_sq,
)
from ..atom.kato import generic_first_term_coefficient
from ..numerics.quadrature import integrate
from ..pulse.shapes import Pulse, PulseIntegrals, absolute_field_integral, displacement, integrals

logger = logging.getLogger(__name__)

# || (V(x - c e_z) - V) psi_100 || <= 2 for every shift
GROUND_STATE_SHIFT_CONSTANT = 2.0

_T1_ABS_TOL = 1e-10
_T1_REL_TOL = 1e-8


class BoundKind(str, Enum):
    UPPER1 = "upper1"
    UPPER2 = "upper2"
    LOWER = "lower"
    PFEIFER = "pfeifer"
    PERT1 = "pert1"


class ShiftMode(str, Enum):
    ESTIMATE = "estimate"
    QUADRATURE = "quadrature"
    EXACT = "exact"


ShiftNormFn = Callable[[float], MatrixElementValue]


@dataclass(frozen=True)
class StateData:
    energy: float
    pz_norm: MatrixElementValue
    z_norm: MatrixElementValue
    shift_norm_fn: ShiftNormFn
    generic_shift_constant: float
    shift_mode: ShiftMode = ShiftMode.ESTIMATE
    label: str = ""

    def __post_init__(self) -> None:
        if not self.energy < 0.0:
            raise ValueError(f"Bound-state energy must be negative, got {self.energy}")
        if self.pz_norm.value < 0.0 or self.z_norm.value < 0.0:
            raise ValueError("Matrix-element norms must be nonnegative")
        if not self.generic_shift_constant >= 0.0:
            raise ValueError(f"Shift constant must be nonnegative, got {self.generic_shift_constant}")


@dataclass(frozen=True)
class BoundReport:
    kind: BoundKind
    raw: float
    clipped: float
    valid: bool
    validity_reason: str = ""
    terms: Tuple[Tuple[str, float], ...] = field(default_factory=tuple)

    @property
    def amplitude(self) -> float:
        return math.fsum(value for _, value in self.terms)

    def term(self, name: str) -> float:
        for key, value in self.terms:
            if key == name:
                return value
        raise KeyError(name)


def _clip(raw: float) -> float:
    return min(1.0, max(0.0, raw))


def _valid_report(kind: BoundKind, terms: List[Tuple[str, float]], reason: str = "") -> BoundReport:
    amplitude = math.fsum(value for _, value in terms)
    raw = 1.0 - amplitude**2 if kind is BoundKind.LOWER else amplitude**2
    return BoundReport(kind=kind, raw=raw, clipped=_clip(raw), valid=True, validity_reason=reason, terms=tuple(terms))


def _invalid_report(kind: BoundKind, reason: str) -> BoundReport:
    logger.debug("%s not applicable: %s", kind.value, reason)
    return BoundReport(kind=kind, raw=math.nan, clipped=math.nan, valid=False, validity_reason=reason)


def _end_of_pulse(pulse: Pulse) -> PulseIntegrals:
    return integrals(pulse, pulse.duration)


def spreading_term(pulse: Pulse, state_data: StateData) -> float:
    """T1 = int_0^tau ||(V(x - c(t) e_z) - V) psi|| dt."""
    tau = pulse.duration
    if tau == 0.0:
        return 0.0
    if state_data.shift_mode is ShiftMode.ESTIMATE:
        return tau * state_data.generic_shift_constant
    fn = state_data.shift_norm_fn
    return integrate(
        lambda t: fn(displacement(pulse, t)).value,
        0.0,
        tau,
        abs_tol=_T1_ABS_TOL,
        rel_tol=_T1_REL_TOL,
        breakpoints=pulse.breakpoints,
    ).value


def _shift_norm_at(c: float, state_data: StateData) -> float:
    if state_data.shift_mode is ShiftMode.ESTIMATE:
        return state_data.generic_shift_constant
    return state_data.shift_norm_fn(c).value


def _common_terms(pulse: Pulse, state_data: StateData, end: PulseIntegrals, drop_spreading: bool):
    terms = []
    if not drop_spreading:
        terms.append(("spreading", spreading_term(pulse, state_data)))
    terms.append(("displacement", abs(end.c) * state_data.pz_norm.value))
    return terms


def upper_bound_1(pulse: Pulse, state_data: StateData, drop_spreading: bool = False) -> BoundReport:
    """Upper bound for pulses whose classical energy transfer b^2/2 is below the binding energy."""
    end = _end_of_pulse(pulse)
    margin = -state_data.energy - 0.5 * end.b**2
    if not margin > 0.0:
        return _invalid_report(
            BoundKind.UPPER1,
            f"classical energy transfer {0.5 * end.b**2:.6g} is not below the ionization energy {-state_data.energy:.6g}",
        )
    terms = _common_terms(pulse, state_data, end, drop_spreading)
    terms.append(("momentum", abs(end.b) * state_data.pz_norm.value / margin))
    return _valid_report(BoundKind.UPPER1, terms)


def upper_bound_2(pulse: Pulse, state_data: StateData, drop_spreading: bool = False) -> BoundReport:
    end = _end_of_pulse(pulse)
    terms = _common_terms(pulse, state_data, end, drop_spreading)
    terms.append(("momentum_width", abs(end.b) * state_data.z_norm.value))
    return _valid_report(BoundKind.UPPER2, terms)


def lower_bound(pulse: Pulse, state_data: StateData, drop_spreading: bool = False) -> BoundReport:
    """Lower bound for pulses whose classical energy transfer exceeds the binding energy.

    The raw value may be negative; ``clipped`` is then 0.
    """
    end = _end_of_pulse(pulse)
    excess = state_data.energy + 0.5 * end.b**2
    if not excess > 0.0:
        return _invalid_report(
            BoundKind.LOWER,
            f"classical energy transfer {0.5 * end.b**2:.6g} does not exceed the ionization energy {-state_data.energy:.6g}",
        )
    terms = []
    if not drop_spreading:
        terms.append(("spreading", spreading_term(pulse, state_data)))
    terms.append(("shift_at_end", _shift_norm_at(end.c, state_data) / excess))
    terms.append(("momentum", abs(end.b) * state_data.pz_norm.value / excess))
    return _valid_report(BoundKind.LOWER, terms)


def pfeifer_bound(pulse: Pulse, state_data: StateData) -> BoundReport:
    """(int |E| dt)^2 a_psi^2 with the width a_psi bounded by ||z psi||."""
    width = state_data.z_norm.value
    return _valid_report(BoundKind.PFEIFER, [("field_width", absolute_field_integral(pulse) * width)])


def first_order_pert_bound(pulse: Pulse, state_data: StateData) -> BoundReport:
    end = _end_of_pulse(pulse)
    return _valid_report(BoundKind.PERT1, [("momentum_width", abs(end.b) * state_data.z_norm.value)])


def stabilization_limit_check(state_data: StateData, tau: float) -> float:
    """Field-independent floor 1 - (tau C)^2 of the lower bound as |b| grows, clipped at 0."""
    if tau < 0.0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    return max(0.0, 1.0 - (tau * state_data.generic_shift_constant) ** 2)


def evaluate_all(pulse: Pulse, state_data: StateData, drop_spreading: bool = False) -> List[BoundReport]:
    """All five reports in the order upper1, upper2, lower, pfeifer, pert1."""
    return [
        upper_bound_1(pulse, state_data, drop_spreading),
        upper_bound_2(pulse, state_data, drop_spreading),
        lower_bound(pulse, state_data, drop_spreading),
        pfeifer_bound(pulse, state_data),
        first_order_pert_bound(pulse, state_data),
    ]


def state_data_for(state: HydrogenState, shift_mode: ShiftMode | str = ShiftMode.ESTIMATE) -> StateData:
    """Assemble the matrix elements the bounds need for a hydrogen state.

    The ground state uses the shift constant 2 and the shifted-Coulomb
    functions; every other state uses K(n, l) as a constant estimate.
    """
    mode = ShiftMode(shift_mode)
    label = f"psi_{state.n}{state.l}{state.m}"
    if state == GROUND_STATE:
        if mode is ShiftMode.EXACT:
            fn: ShiftNormFn = lambda c: shift_difference_norm(c, exact=True, cross_term_method="radial")
        else:
            fn = lambda c: shift_difference_norm(c)
        constant = GROUND_STATE_SHIFT_CONSTANT
    else:
        if mode is ShiftMode.EXACT:
            raise ValueError(f"Exact shift norms are only available for the ground state, not {label}")
        constant = generic_first_term_coefficient(state)
        estimate = MatrixElementValue(constant, Exactness.UPPER_ESTIMATE)
        fn = lambda c: estimate
    return StateData(
        energy=state.energy,
        pz_norm=pz_norm_sq(state).sqrt(),
        z_norm=z_norm_sq(state).sqrt(),
        shift_norm_fn=fn,
        generic_shift_constant=constant,
        shift_mode=mode,
        label=label,
    )
