"""Gordon-Volkov propagators and the gauge transformations between the three frames.

Frames:

    length               H1 = -Delta/2 + V + z E(t)
    velocity             H2 = (-i grad - b(t) e_z)^2 / 2 + V
    kramers_henneberger  H3 = -Delta/2 + V(x - c(t) e_z)

Every transformation used here has the form

    G = exp(-i phase) exp(-i slope z) S(shift),   (S(s) f)(z) = f(z - s),

so the group law only acts on the three numbers (phase, slope, shift). The
Kramers-Henneberger map T(t) = A(1<-3) = exp(-i a) exp(-i b z) exp(-i c p_z)
is (a, b, c), and A(2<-1) = exp(i b z) is (0, -b, 0).

Kernels are evaluated with the principal branch
(2 pi i D)^(-3/2) = (2 pi |D|)^(-3/2) exp(-3 i pi/4 sign D).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..numerics.quadrature import integrate
from ..pulse.shapes import Pulse, PulseIntegrals, integrals
from ..utils.errors import GridTruncationError, KernelSingularityError

logger = logging.getLogger(__name__)

# below this fraction of a grid step a shift counts as commensurate
_COMMENSURATE_TOLERANCE = 1e-9


class GaugeFrame(str, Enum):
    LENGTH = "length"
    VELOCITY = "velocity"
    KRAMERS_HENNEBERGER = "kramers_henneberger"


@dataclass(frozen=True)
class VolkovKernelParams:
    t: float
    t_prime: float
    b_t: float
    b_tp: float
    c_t: float
    c_tp: float
    a_t: float
    a_tp: float

    @property
    def delta(self) -> float:
        return self.t - self.t_prime

    @classmethod
    def from_pulse(cls, pulse: Pulse, t: float, t_prime: float) -> "VolkovKernelParams":
        return cls.from_integrals(integrals(pulse, t), integrals(pulse, t_prime))

    @classmethod
    def from_integrals(cls, at_t: PulseIntegrals, at_tp: PulseIntegrals) -> "VolkovKernelParams":
        return cls(
            t=at_t.at_time,
            t_prime=at_tp.at_time,
            b_t=at_t.b,
            b_tp=at_tp.b,
            c_t=at_t.c,
            c_tp=at_tp.c,
            a_t=at_t.a,
            a_tp=at_tp.a,
        )


@dataclass(frozen=True, eq=False)
class SampledWave:
    """Complex amplitudes on the uniform grid linspace(z_min, z_max, n_points).

    ``error_estimate`` is the relative L2 error accumulated by operations
    that had to interpolate or truncate.
    """

    z_min: float
    z_max: float
    values: np.ndarray
    error_estimate: float = 0.0

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 1 or values.size < 2:
            raise ValueError(f"A sampled wave needs a 1-D array of at least 2 values, got shape {values.shape}")
        if not self.z_max > self.z_min:
            raise ValueError(f"Grid bounds out of order: z_min={self.z_min}, z_max={self.z_max}")
        if not np.all(np.isfinite(values)):
            raise ValueError("Sampled wave contains non-finite values")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], z_min: float, z_max: float, n_points: int) -> "SampledWave":
        grid = np.linspace(z_min, z_max, n_points)
        return cls(z_min=z_min, z_max=z_max, values=np.asarray(f(grid), dtype=complex))

    @property
    def n_points(self) -> int:
        return int(self.values.size)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.n_points)

    @property
    def step(self) -> float:
        return (self.z_max - self.z_min) / (self.n_points - 1)

    def norm(self) -> float:
        return math.sqrt(self.step * float(np.sum(np.abs(self.values) ** 2)))

    def with_values(self, values: np.ndarray, error: float = 0.0) -> "SampledWave":
        return SampledWave(self.z_min, self.z_max, values, self.error_estimate + error)


# Free and Volkov kernels

def _check_delta(delta: float) -> float:
    delta = float(delta)
    if delta == 0.0:
        raise KernelSingularityError("The propagator kernel at t = t' is the distributional limit delta(x - x')")
    return delta


def _prefactor(delta: float, dimension: int) -> complex:
    """(2 pi i delta)^(-dimension/2) on the principal branch."""
    modulus = (2.0 * math.pi * abs(delta)) ** (-0.5 * dimension)
    return modulus * complex(np.exp(-0.25j * math.pi * dimension * math.copysign(1.0, delta)))


def free_kernel_1d(z: float, z_prime: float, delta: float) -> complex:
    delta = _check_delta(delta)
    return _prefactor(delta, 1) * complex(np.exp(1j * (z - z_prime) ** 2 / (2.0 * delta)))


def free_kernel(x: Sequence[float], t: float, x_prime: Sequence[float], t_prime: float) -> complex:
    """<x| exp(i (t - t') Delta / 2) |x'> in three dimensions."""
    delta = _check_delta(t - t_prime)
    d = np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float)
    return _prefactor(delta, 3) * complex(np.exp(1j * float(d @ d) / (2.0 * delta)))


def volkov_kernel_1d(frame: GaugeFrame, params: VolkovKernelParams, z: float, z_prime: float) -> complex:
    """The z-factor of the Volkov kernel; the x and y factors are free kernels."""
    frame = GaugeFrame(frame)
    delta = _check_delta(params.delta)
    if frame is GaugeFrame.KRAMERS_HENNEBERGER:
        return free_kernel_1d(z, z_prime, delta)
    spread = z - params.c_t - z_prime + params.c_tp
    phase = params.a_tp - params.a_t + spread**2 / (2.0 * delta)
    if frame is GaugeFrame.LENGTH:
        phase += params.b_tp * z_prime - params.b_t * z
    return _prefactor(delta, 1) * complex(np.exp(1j * phase))


def volkov_kernel(frame: GaugeFrame, params: VolkovKernelParams, x: Sequence[float], x_prime: Sequence[float]) -> complex:
    """Kernel of U0,i(t, t') = A(i<-3)(t) U0,3(t, t') A(i<-3)(t')^-1.

    Length gauge:
        (2 pi i D)^(-3/2) exp i(a(t') - a(t)) exp i(b(t') z' - b(t) z)
            exp i |x - c(t) e_z - x' + c(t') e_z|^2 / (2 D)
    Velocity gauge: the same without the b-phase.
    """
    delta = _check_delta(params.delta)
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    transverse = free_kernel_1d(x[0], x_prime[0], delta) * free_kernel_1d(x[1], x_prime[1], delta)
    return transverse * volkov_kernel_1d(frame, params, float(x[2]), float(x_prime[2]))


def _apply_kernel(kernel: Callable[[float], complex], support: Tuple[float, float]) -> complex:
    lo, hi = support
    real = integrate(lambda s: kernel(s).real, lo, hi).value
    imag = integrate(lambda s: kernel(s).imag, lo, hi).value
    return complex(real, imag)


def apply_free_kernel(
    f: Callable[[float], complex],
    z: float,
    delta: float,
    support: Tuple[float, float] = (-15.0, 15.0),
) -> complex:
    """(U0(delta) f)(z) = int K(z, z', delta) f(z') dz' by quadrature over ``support``."""
    return _apply_kernel(lambda s: free_kernel_1d(z, s, delta) * f(s), support)


def apply_volkov_kernel(
    frame: GaugeFrame,
    params: VolkovKernelParams,
    f: Callable[[float], complex],
    z: float,
    support: Tuple[float, float] = (-15.0, 15.0),
) -> complex:
    return _apply_kernel(lambda s: volkov_kernel_1d(frame, params, z, s) * f(s), support)


def gaussian_free_evolution(z: np.ndarray, delta: float) -> np.ndarray:
    """exp(-z^2/2) evolved freely for time delta: (1 + i delta)^(-1/2) exp(-z^2 / (2 (1 + i delta)))."""
    w = 1.0 + 1j * delta
    return np.exp(-np.asarray(z) ** 2 / (2.0 * w)) / np.sqrt(w)


def free_propagate_spectral(wave: SampledWave, delta: float) -> SampledWave:
    """Free evolution by exact multiplication with exp(-i k^2 delta / 2) in Fourier space.

    The grid is treated as periodic, so the wave must be negligible at both ends.
    """
    k = 2.0 * np.pi * np.fft.fftfreq(wave.n_points, d=wave.step)
    evolved = np.fft.ifft(np.fft.fft(wave.values) * np.exp(-0.5j * k**2 * delta))
    return wave.with_values(evolved)


# Gauge transformations

@dataclass(frozen=True)
class GaugeTransform:
    """exp(-i phase) exp(-i slope z) S(shift), optionally labelled A(target <- source)."""

    phase: float = 0.0
    slope: float = 0.0
    shift: float = 0.0
    source: Optional[GaugeFrame] = None
    target: Optional[GaugeFrame] = None

    def inverse(self) -> "GaugeTransform":
        return GaugeTransform(
            phase=-self.phase - self.slope * self.shift,
            slope=-self.slope,
            shift=-self.shift,
            source=self.target,
            target=self.source,
        )

    def is_identity(self, tol: float = 0.0) -> bool:
        return abs(self.phase) <= tol and abs(self.slope) <= tol and abs(self.shift) <= tol

    def kernel_factor(self, z: float) -> complex:
        """The multiplicative part exp(-i phase) exp(-i slope z)."""
        return complex(np.exp(-1j * (self.phase + self.slope * z)))


IDENTITY = GaugeTransform()


def gauge_compose(g1: GaugeTransform, g2: GaugeTransform) -> GaugeTransform:
    """g1 g2, using S(s) exp(-i beta z) = exp(i beta s) exp(-i beta z) S(s)."""
    if g1.source is not None and g2.target is not None and g1.source is not g2.target:
        raise ValueError(f"Cannot compose A(.<-{g1.source.value}) with A({g2.target.value}<-.)")
    return GaugeTransform(
        phase=g1.phase + g2.phase - g2.slope * g1.shift,
        slope=g1.slope + g2.slope,
        shift=g1.shift + g2.shift,
        source=g2.source,
        target=g1.target,
    )


def kramers_henneberger(b: float, c: float, a: float) -> GaugeTransform:
    """T = exp(-i a) exp(-i b z) exp(-i c p_z), taking H3 to H1; exp(-i c p_z) f(z) = f(z - c)."""
    return GaugeTransform(phase=a, slope=b, shift=c, source=GaugeFrame.KRAMERS_HENNEBERGER, target=GaugeFrame.LENGTH)


def _to_length(frame: GaugeFrame, at: PulseIntegrals) -> GaugeTransform:
    if frame is GaugeFrame.LENGTH:
        return GaugeTransform(source=frame, target=frame)
    if frame is GaugeFrame.KRAMERS_HENNEBERGER:
        return kramers_henneberger(at.b, at.c, at.a)
    velocity_from_length = GaugeTransform(slope=-at.b, source=GaugeFrame.LENGTH, target=GaugeFrame.VELOCITY)
    return velocity_from_length.inverse()


def gauge_transform(frame_from: GaugeFrame, frame_to: GaugeFrame, at: PulseIntegrals) -> GaugeTransform:
    """A(to <- from) at the time of ``at``, via A(j<-i) = A(1<-j)^-1 A(1<-i)."""
    frame_from, frame_to = GaugeFrame(frame_from), GaugeFrame(frame_to)
    return gauge_compose(_to_length(frame_to, at).inverse(), _to_length(frame_from, at))


def _translate(values: np.ndarray, shift_points: float) -> Tuple[np.ndarray, float]:
    """Sample values of f(z - shift); returns the values and the relative error estimate."""
    n = values.size
    total = float(np.sum(np.abs(values) ** 2))
    m = round(shift_points)
    if abs(shift_points - m) < _COMMENSURATE_TOLERANCE:
        out = np.zeros_like(values)
        if m >= 0:
            out[m:] = values[: n - m]
            lost = values[n - m :]
        else:
            out[: n + m] = values[-m:]
            lost = values[:-m]
        discarded = float(np.sum(np.abs(lost) ** 2))
        return out, math.sqrt(discarded / total) if total > 0.0 else 0.0

    # band-limited interpolation on a zero-padded grid, so nothing wraps around
    size = n + int(math.ceil(abs(shift_points))) + 1
    padded = np.zeros(size, dtype=complex)
    padded[:n] = values
    k = 2.0 * np.pi * np.fft.fftfreq(size)
    spectrum = np.fft.fft(padded)
    shifted = np.fft.ifft(spectrum * np.exp(-1j * k * shift_points))
    out = shifted[:n]
    discarded = float(np.sum(np.abs(shifted[n:]) ** 2))
    power = np.abs(spectrum) ** 2
    tail = float(np.sum(power[np.abs(k) > 0.5 * np.pi]))
    spectral = float(np.sum(power))
    error = math.sqrt(discarded / total) if total > 0.0 else 0.0
    if spectral > 0.0:
        error += math.sqrt(tail / spectral)
    return out, error


def apply_gauge(transform: GaugeTransform, wave: SampledWave) -> SampledWave:
    """(G f)(z) = exp(-i phase) exp(-i slope z) f(z - shift) on the wave's grid."""
    span = wave.z_max - wave.z_min
    if abs(transform.shift) >= span:
        raise GridTruncationError(f"Shift {transform.shift:.6g} exceeds the grid span {span:.6g}")
    values, error = _translate(wave.values, transform.shift / wave.step)
    if error > 0.0:
        logger.debug("translation by %.6g: relative error estimate %.3e", transform.shift, error)
    values = values * np.exp(-1j * (transform.phase + transform.slope * wave.grid))
    return wave.with_values(values, error)


def kh_transform(wave: SampledWave, b: float, c: float, a: float, inverse: bool = False) -> SampledWave:
    """Apply T = exp(-i a) exp(-i b z) exp(-i c p_z), or T^-1 when ``inverse``."""
    transform = kramers_henneberger(b, c, a)
    return apply_gauge(transform.inverse() if inverse else transform, wave)
