"""Finite-duration, linearly polarized electric-field pulses in atomic units.

A pulse E(t) vanishes outside [0, tau]. From it we derive the classical
momentum transfer b(t), the quiver displacement c(t) and the Volkov phase a(t):

    b(t) = int_0^t E(s) ds
    c(t) = int_0^t b(s) ds = t b(t) - int_0^t s E(s) ds
    a(t) = 1/2 int_0^t b(s)^2 ds

For t > tau, b is frozen at b(tau) while c and a grow linearly.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..numerics.quadrature import integrate
from ..utils.errors import ConfigError, ConsistencyError, DistributionalPulseError

logger = logging.getLogger(__name__)

# One atomic unit of intensity, W/cm^2
ATOMIC_UNIT_INTENSITY = 3.5e16

CTERM_TOLERANCE = 1e-9

METHODS = ("auto", "closed", "quadrature")


@dataclass(frozen=True)
class PulseIntegrals:
    b: float
    c: float
    a: float
    at_time: float


class Pulse(ABC):
    """Base class for pulse shapes. Subclasses are immutable dataclasses."""

    shape: str = ""

    @property
    @abstractmethod
    def duration(self) -> float:
        ...

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        """Interior points of [0, tau] where E is not smooth."""
        return ()

    @abstractmethod
    def _field_inside(self, t: float) -> float:
        ...

    def closed_form(self, t: float) -> Optional[Tuple[float, float, float]]:
        """(b, c, a) at 0 <= t <= tau when an analytic expression exists."""
        return None

    def field_zeros(self) -> Tuple[float, ...]:
        """Interior sign changes of E, which are kinks of |E|."""
        return ()

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class CosinePulse(Pulse):
    """E(t) = E0 cos(omega t) on [0, tau]."""

    E0: float
    omega: float
    tau: float
    shape = "cosine"

    def __post_init__(self) -> None:
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.tau > 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")

    @property
    def duration(self) -> float:
        return self.tau

    def _field_inside(self, t: float) -> float:
        return self.E0 * math.cos(self.omega * t)

    def closed_form(self, t: float) -> Optional[Tuple[float, float, float]]:
        w, e0 = self.omega, self.E0
        b = e0 / w * math.sin(w * t)
        c = 2.0 * e0 / w**2 * math.sin(0.5 * w * t) ** 2
        a = e0**2 / (4.0 * w**2) * (t - math.sin(2.0 * w * t) / (2.0 * w))
        return b, c, a

    def field_zeros(self) -> Tuple[float, ...]:
        return _cosine_zeros(self.omega, self.tau)

    def to_config(self) -> dict:
        return {"shape": self.shape, "E0": self.E0, "omega": self.omega, "tau": self.tau}


@dataclass(frozen=True)
class RampedCosinePulse(Pulse):
    """Cosine carrier under a sin^2 turn-on of ``ramp_cycles`` periods, mirrored at turn-off."""

    E0: float
    omega: float
    tau: float
    ramp_cycles: float
    shape = "cosine_ramped"

    def __post_init__(self) -> None:
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.tau > 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.ramp_cycles < 0.0:
            raise ValueError(f"ramp_cycles must be nonnegative, got {self.ramp_cycles}")
        if 2.0 * self.ramp_time > self.tau * (1.0 + 1e-12):
            raise ValueError(
                f"Turn-on and turn-off ramps ({2.0 * self.ramp_time:.6g}) do not fit in tau={self.tau:.6g}"
            )

    @property
    def duration(self) -> float:
        return self.tau

    @property
    def ramp_time(self) -> float:
        return self.ramp_cycles * 2.0 * math.pi / self.omega

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        tr = self.ramp_time
        if tr <= 0.0:
            return ()
        return tuple(sorted({tr, self.tau - tr}))

    def envelope(self, t: float) -> float:
        tr = self.ramp_time
        if tr <= 0.0:
            return 1.0
        if t < tr:
            return math.sin(0.5 * math.pi * t / tr) ** 2
        if t > self.tau - tr:
            return math.sin(0.5 * math.pi * (self.tau - t) / tr) ** 2
        return 1.0

    def _field_inside(self, t: float) -> float:
        return self.E0 * self.envelope(t) * math.cos(self.omega * t)

    def field_zeros(self) -> Tuple[float, ...]:
        return _cosine_zeros(self.omega, self.tau)

    def to_config(self) -> dict:
        return {
            "shape": self.shape,
            "E0": self.E0,
            "omega": self.omega,
            "tau": self.tau,
            "ramp_cycles": self.ramp_cycles,
        }


@dataclass(frozen=True)
class ConstantPulse(Pulse):
    """Square pulse of height E0. E0 = 0 is the zero pulse."""

    E0: float
    tau: float
    shape = "constant"

    def __post_init__(self) -> None:
        if not self.tau > 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")

    @property
    def duration(self) -> float:
        return self.tau

    def _field_inside(self, t: float) -> float:
        return self.E0

    def closed_form(self, t: float) -> Optional[Tuple[float, float, float]]:
        e0 = self.E0
        return e0 * t, 0.5 * e0 * t**2, e0**2 * t**3 / 6.0

    def to_config(self) -> dict:
        return {"shape": self.shape, "E0": self.E0, "tau": self.tau}


@dataclass(frozen=True)
class DeltaKick(Pulse):
    """The Stark kick E(t) = F0 delta(t); stored with duration 0."""

    F0: float
    shape = "delta_kick"

    @property
    def duration(self) -> float:
        return 0.0

    def _field_inside(self, t: float) -> float:
        raise DistributionalPulseError("A delta kick is a distributional pulse and has no pointwise value")

    def closed_form(self, t: float) -> Optional[Tuple[float, float, float]]:
        return self.F0, self.F0 * t, 0.5 * self.F0**2 * t

    def to_config(self) -> dict:
        return {"shape": self.shape, "F0": self.F0}


@dataclass(frozen=True)
class TabulatedPulse(Pulse):
    """Linear interpolation through ``samples`` of (t, E); zero outside the sampled range."""

    samples: Tuple[Tuple[float, float], ...]
    tau: float
    shape = "tabulated"
    _times: np.ndarray = field(init=False, repr=False, compare=False)
    _values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.tau > 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if len(self.samples) < 2:
            raise ValueError("A tabulated pulse needs at least two samples")
        times = np.array([float(t) for t, _ in self.samples])
        values = np.array([float(e) for _, e in self.samples])
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("Sample times must be strictly increasing")
        if times[0] < 0.0 or times[-1] > self.tau:
            raise ValueError(f"Sample times must lie within [0, {self.tau}]")
        object.__setattr__(self, "_times", times)
        object.__setattr__(self, "_values", values)

    @property
    def duration(self) -> float:
        return self.tau

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(float(t) for t in self._times if 0.0 < t < self.tau)

    def _field_inside(self, t: float) -> float:
        return float(np.interp(t, self._times, self._values, left=0.0, right=0.0))

    def field_zeros(self) -> Tuple[float, ...]:
        t, e = self._times, self._values
        zeros: List[float] = []
        for i in range(len(t) - 1):
            if e[i] * e[i + 1] < 0.0:
                zeros.append(float(t[i] - e[i] * (t[i + 1] - t[i]) / (e[i + 1] - e[i])))
        return tuple(zeros)

    def to_config(self) -> dict:
        return {"shape": self.shape, "tau": self.tau, "samples": [list(s) for s in self.samples]}


def _cosine_zeros(omega: float, tau: float) -> Tuple[float, ...]:
    zeros = []
    k = 0
    while True:
        t = (k + 0.5) * math.pi / omega
        if t >= tau:
            break
        zeros.append(t)
        k += 1
    return tuple(zeros)


def _check_time(t: float) -> float:
    t = float(t)
    if t < 0.0:
        raise ValueError(f"Pulse integrals are defined for t >= 0, got t={t}")
    return t


def _resolve_method(pulse: Pulse, method: str) -> str:
    if method not in METHODS:
        raise ValueError(f"Unknown method '{method}', expected one of {METHODS}")
    if isinstance(pulse, DeltaKick):
        return "closed"
    has_closed = pulse.closed_form(0.0) is not None
    if method == "closed" and not has_closed:
        raise ValueError(f"No closed form for pulse shape '{pulse.shape}'")
    if method == "auto":
        return "closed" if has_closed else "quadrature"
    return method


def evaluate(pulse: Pulse, t: float) -> float:
    """Field strength E(t) in atomic units; exactly 0 outside [0, tau]."""
    if isinstance(pulse, DeltaKick):
        return pulse._field_inside(t)
    t = float(t)
    if t < 0.0 or t > pulse.duration:
        return 0.0
    return pulse._field_inside(t)


def _breaks_up_to(pulse: Pulse, t: float) -> List[float]:
    return [p for p in pulse.breakpoints if p < t]


def _b_quadrature(pulse: Pulse, t: float) -> float:
    return integrate(pulse._field_inside, 0.0, t, breakpoints=_breaks_up_to(pulse, t)).value


# evenly spaced nodes added to every momentum table on top of kinks and field zeros
TABLE_NODES = 17


class _MomentumTable:
    """b(s) on [0, t_end] as a cumulative sum over short smooth panels.

    Node values are accumulated once; b at any s is the node value below it
    plus one short integral of E. Integrals of b then never nest a quadrature
    over the whole of [0, s].
    """

    def __init__(self, pulse: Pulse, t_end: float) -> None:
        candidates = [0.0, t_end, *_breaks_up_to(pulse, t_end)]
        candidates += [z for z in pulse.field_zeros() if 0.0 < z < t_end]
        candidates += list(np.linspace(0.0, t_end, TABLE_NODES))
        self.pulse = pulse
        self.nodes = np.unique(np.asarray(candidates, dtype=float))
        steps = [integrate(pulse._field_inside, lo, hi).value for lo, hi in zip(self.nodes[:-1], self.nodes[1:])]
        self.values = np.concatenate(([0.0], np.cumsum(steps)))

    @property
    def interior(self) -> List[float]:
        return [float(x) for x in self.nodes[1:-1]]

    def __call__(self, s: float) -> float:
        k = int(np.searchsorted(self.nodes, s, side="right")) - 1
        k = min(max(k, 0), len(self.nodes) - 1)
        lo = float(self.nodes[k])
        if s <= lo:
            return float(self.values[k])
        return float(self.values[k]) + integrate(self.pulse._field_inside, lo, s).value


def _mismatch(value: float, reference: float) -> bool:
    return abs(value - reference) > CTERM_TOLERANCE * max(1.0, abs(value))


def momentum_transfer(pulse: Pulse, t: float, method: str = "auto", check: bool = False) -> float:
    """b(t); for t > tau returns b(tau).

    With ``check`` a closed-form value is compared against quadrature and a
    ``ConsistencyError`` raised when they disagree.
    """
    t = _check_time(t)
    how = _resolve_method(pulse, method)
    if isinstance(pulse, DeltaKick):
        return pulse.F0
    s = min(t, pulse.duration)
    if how == "closed":
        value = pulse.closed_form(s)[0]
        if check:
            reference = _b_quadrature(pulse, s)
            if _mismatch(value, reference):
                raise ConsistencyError(
                    f"Closed-form b disagrees with quadrature at t={s:.6g}: {value:.15g} vs {reference:.15g}"
                )
        return value
    return _b_quadrature(pulse, s)


def _c_inside(pulse: Pulse, t: float, how: str, check: bool = False) -> float:
    if how == "closed":
        value = pulse.closed_form(t)[1]
        if check:
            reference = displacement_by_parts(pulse, t)
            if _mismatch(value, reference):
                raise ConsistencyError(
                    f"Closed-form c disagrees with t b - int sE at t={t:.6g}: {value:.15g} vs {reference:.15g}"
                )
        return value
    table = _MomentumTable(pulse, t)
    direct = integrate(table, 0.0, t, breakpoints=table.interior).value
    moment = integrate(lambda s: s * pulse._field_inside(s), 0.0, t, breakpoints=table.interior).value
    by_parts = t * table(t) - moment
    if _mismatch(direct, by_parts):
        raise ConsistencyError(
            f"Displacement formulas disagree at t={t:.6g}: int b = {direct:.15g}, t b - int sE = {by_parts:.15g}"
        )
    return direct


def displacement(pulse: Pulse, t: float, method: str = "auto", check: bool = False) -> float:
    """c(t); grows linearly with slope b(tau) beyond tau."""
    t = _check_time(t)
    how = _resolve_method(pulse, method)
    if isinstance(pulse, DeltaKick):
        return pulse.closed_form(t)[1]
    tau = pulse.duration
    if t <= tau:
        return _c_inside(pulse, t, how, check)
    return _c_inside(pulse, tau, how, check) + (t - tau) * momentum_transfer(pulse, tau, method, check)


def displacement_by_parts(pulse: Pulse, t: float) -> float:
    """c(t) from the second form, t b(t) - int_0^t s E(s) ds, by quadrature."""
    t = _check_time(t)
    if isinstance(pulse, DeltaKick):
        return pulse.closed_form(t)[1]
    s = min(t, pulse.duration)
    moment = integrate(lambda u: u * pulse._field_inside(u), 0.0, s, breakpoints=_breaks_up_to(pulse, s)).value
    b = _b_quadrature(pulse, s)
    return s * b - moment + (t - s) * b


def volkov_phase(pulse: Pulse, t: float, method: str = "auto") -> float:
    """a(t), nonnegative and nondecreasing in t."""
    t = _check_time(t)
    how = _resolve_method(pulse, method)
    if isinstance(pulse, DeltaKick):
        return pulse.closed_form(t)[2]
    tau = pulse.duration
    s = min(t, tau)
    if how == "closed":
        b_end, _, inside = pulse.closed_form(s)
    else:
        table = _MomentumTable(pulse, s)
        inside = 0.5 * integrate(lambda u: table(u) ** 2, 0.0, s, breakpoints=table.interior).value
        b_end = table(s)
    return max(0.0, inside) + 0.5 * b_end**2 * (t - s)


def integrals(pulse: Pulse, t: float, method: str = "auto") -> PulseIntegrals:
    return PulseIntegrals(
        b=momentum_transfer(pulse, t, method),
        c=displacement(pulse, t, method),
        a=volkov_phase(pulse, t, method),
        at_time=float(t),
    )


def absolute_field_integral(pulse: Pulse) -> float:
    """int_0^tau |E(t)| dt; |F0| for a delta kick."""
    if isinstance(pulse, DeltaKick):
        return abs(pulse.F0)
    breaks = list(pulse.breakpoints) + list(pulse.field_zeros())
    return integrate(lambda s: abs(pulse._field_inside(s)), 0.0, pulse.duration, breakpoints=breaks).value


def half_cycle_times(pulse: Pulse) -> List[float]:
    """Times 2 pi (n + 1/2) / omega within the pulse, where |b| and |c| of a cosine pulse peak."""
    if not isinstance(pulse, (CosinePulse, RampedCosinePulse)):
        raise ValueError(f"Half cycles are defined for cosine pulses, not '{pulse.shape}'")
    period = 2.0 * math.pi / pulse.omega
    times = []
    n = 0
    while (n + 0.5) * period <= pulse.tau * (1.0 + 1e-12):
        times.append((n + 0.5) * period)
        n += 1
    return times


def integer_cycle_duration(omega: float, cycles: int) -> float:
    return 2.0 * math.pi * cycles / omega


def intensity_to_field(intensity: float) -> float:
    """Peak field in atomic units for an intensity in W/cm^2."""
    if intensity < 0.0:
        raise ValueError(f"Intensity must be nonnegative, got {intensity}")
    return math.sqrt(intensity / ATOMIC_UNIT_INTENSITY)


def field_to_intensity(field_au: float) -> float:
    if field_au < 0.0:
        raise ValueError(f"Field amplitude must be nonnegative, got {field_au}")
    return field_au**2 * ATOMIC_UNIT_INTENSITY


# Pulse config grammar

PULSE_KEYS = ("shape", "E0", "omega", "tau", "ramp_cycles", "F0", "samples")

_REQUIRED = {
    "cosine": ("E0", "omega", "tau"),
    "cosine_ramped": ("E0", "omega", "tau", "ramp_cycles"),
    "constant": ("E0", "tau"),
    "delta_kick": ("F0",),
    "tabulated": ("tau", "samples"),
}


def _number(mapping: Mapping[str, Any], key: str) -> float:
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=key)
    return float(value)


def _samples(raw: Any) -> Tuple[Tuple[float, float], ...]:
    if not isinstance(raw, Sequence) or isinstance(raw, str):
        raise ConfigError("expected a list of [t, E] pairs", field="samples")
    pairs = []
    for i, item in enumerate(raw):
        if not isinstance(item, Sequence) or isinstance(item, str) or len(item) != 2:
            raise ConfigError(f"entry {i} is not a [t, E] pair: {item!r}", field="samples")
        try:
            pairs.append((float(item[0]), float(item[1])))
        except (TypeError, ValueError):
            raise ConfigError(f"entry {i} is not numeric: {item!r}", field="samples") from None
    return tuple(pairs)


def from_config(mapping: Mapping[str, Any]) -> Pulse:
    """Build a pulse from the config grammar (keys in ``PULSE_KEYS``)."""
    unknown = sorted(set(mapping) - set(PULSE_KEYS))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown}", field=unknown[0])
    shape = mapping.get("shape")
    if shape not in _REQUIRED:
        raise ConfigError(f"unknown shape {shape!r}, expected one of {sorted(_REQUIRED)}", field="shape")
    for key in _REQUIRED[shape]:
        if key not in mapping:
            raise ConfigError(f"required for shape '{shape}'", field=key)
    try:
        if shape == "cosine":
            return CosinePulse(E0=_number(mapping, "E0"), omega=_number(mapping, "omega"), tau=_number(mapping, "tau"))
        if shape == "cosine_ramped":
            return RampedCosinePulse(
                E0=_number(mapping, "E0"),
                omega=_number(mapping, "omega"),
                tau=_number(mapping, "tau"),
                ramp_cycles=_number(mapping, "ramp_cycles"),
            )
        if shape == "constant":
            return ConstantPulse(E0=_number(mapping, "E0"), tau=_number(mapping, "tau"))
        if shape == "delta_kick":
            return DeltaKick(F0=_number(mapping, "F0"))
        return TabulatedPulse(samples=_samples(mapping["samples"]), tau=_number(mapping, "tau"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
