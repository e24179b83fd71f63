"""Hydrogen eigenstates and the matrix elements the ionization bounds need.

All quantities are in atomic units with V(x) = -1/|x|. The shifted-Coulomb
functions refer to the ground state psi_100 = exp(-r) / sqrt(pi), whose
probability density integrates as 4 r^2 exp(-2r) dr over the radius.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import eval_genlaguerre, genlaguerre

from ..numerics.quadrature import integrate, integrate_semi_infinite

logger = logging.getLogger(__name__)

# below this shift the closed forms lose digits; use the series limit
SMALL_SHIFT = 1e-6

# shifted-Coulomb integrands decay like exp(-2r) times a power of r
_TAIL_DECAY = 1.0

# the ground-state density lives within a few Bohr radii; split long inner ranges there
_PEAK_BREAKS = (2.0, 10.0, 40.0)


class Exactness(str, Enum):
    EXACT = "exact"
    UPPER_ESTIMATE = "upper_estimate"


@dataclass(frozen=True)
class MatrixElementValue:
    value: float
    exactness: Exactness

    @property
    def is_exact(self) -> bool:
        return self.exactness is Exactness.EXACT

    def sqrt(self) -> "MatrixElementValue":
        return MatrixElementValue(math.sqrt(self.value), self.exactness)


@dataclass(frozen=True)
class HydrogenState:
    n: int
    l: int = 0
    m: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise ValueError(f"l must satisfy 0 <= l <= n-1, got n={self.n}, l={self.l}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| must not exceed l, got l={self.l}, m={self.m}")

    @property
    def energy(self) -> float:
        return -0.5 / self.n**2

    @property
    def is_s_state(self) -> bool:
        return self.l == 0

    @classmethod
    def parse(cls, text: str) -> "HydrogenState":
        """Parse ``"n,l,m"`` (``m`` may be omitted)."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if len(parts) not in (2, 3):
            raise ValueError(f"Expected 'n,l,m', got {text!r}")
        try:
            numbers = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"Quantum numbers must be integers, got {text!r}") from None
        return cls(*numbers)


GROUND_STATE = HydrogenState(1, 0, 0)


# Closed-form expectation values

def r2_mean(state: HydrogenState) -> float:
    n, l = state.n, state.l
    return 0.5 * n**2 * (5 * n**2 + 1 - 3 * l * (l + 1))


def inverse_r_mean(state: HydrogenState) -> float:
    return 1.0 / state.n**2


def inverse_r2_mean(state: HydrogenState) -> float:
    return 1.0 / (state.n**3 * (state.l + 0.5))


def pz_norm_sq(state: HydrogenState) -> MatrixElementValue:
    """||p_z psi||^2: 1/(3n^2) for s-states, else the virial bound 2<H0> = 1/n^2."""
    if state.is_s_state:
        return MatrixElementValue(1.0 / (3.0 * state.n**2), Exactness.EXACT)
    return MatrixElementValue(-2.0 * state.energy, Exactness.UPPER_ESTIMATE)


def z_norm_sq(state: HydrogenState) -> MatrixElementValue:
    """||z psi||^2: <r^2>/3 for s-states, else <r^2> as an upper estimate."""
    if state.is_s_state:
        return MatrixElementValue(r2_mean(state) / 3.0, Exactness.EXACT)
    return MatrixElementValue(r2_mean(state), Exactness.UPPER_ESTIMATE)


def pfeifer_width(state: HydrogenState) -> MatrixElementValue:
    """a_psi = (||z psi||^2 - <z>^2)^(1/2) = ||z psi||, since <z> = 0 by parity."""
    return z_norm_sq(state).sqrt()


def h0_shift_norm_sq(state: HydrogenState) -> float:
    """||(2 H0 + 1) psi_nlm||^2 = 1 + 2/n^2 - 3/n^4 + 4/(n^3 (l + 1/2)).

    Expanding (2H0 + 1) psi = (2E + 1) psi + (2/r) psi gives
    (2E+1)^2 + 4 (2E+1) <1/r> + 4 <1/r^2>. Equals 8 for the ground state.
    """
    n = state.n
    return 1.0 + 2.0 / n**2 - 3.0 / n**4 + 4.0 * inverse_r2_mean(state)


def h0_shift_norm_sq_printed(state: HydrogenState) -> float:
    """The printed literature value 1 - 1/n^4 + 4/(n^3 (l + 1/2)).

    It carries the cross term with weight 2 instead of 4, so it agrees with
    ``h0_shift_norm_sq`` only at n = 1 and underestimates it otherwise.
    Kept for reporting next to the corrected value.
    """
    n = state.n
    return 1.0 - 1.0 / n**4 + 4.0 * inverse_r2_mean(state)


# Radial quadrature oracle

def _radial_norm(n: int, l: int) -> float:
    return math.sqrt((2.0 / n) ** 3 * math.factorial(n - l - 1) / (2.0 * n * math.factorial(n + l)))


def radial_wavefunction(n: int, l: int, r: float) -> float:
    """R_nl(r), normalized so that int R^2 r^2 dr = 1."""
    rho = 2.0 * r / n
    return _radial_norm(n, l) * rho**l * math.exp(-0.5 * rho) * float(eval_genlaguerre(n - l - 1, 2 * l + 1, rho))


def radial_expectation(n: int, l: int, power: int) -> float:
    """<r^power> from the explicit radial wavefunction by quadrature."""

    def integrand(r: float) -> float:
        return radial_wavefunction(n, l, r) ** 2 * r ** (2 + power)

    return integrate_semi_infinite(integrand, 0.0, decay_rate=1.0 / n).value


def h0_shift_norm_sq_quadrature(state: HydrogenState) -> float:
    """Rebuild ||(2H0+1) psi||^2 from quadrature values of <1/r> and <1/r^2>."""
    alpha = 2.0 * state.energy + 1.0
    inv_r = radial_expectation(state.n, state.l, -1)
    inv_r2 = radial_expectation(state.n, state.l, -2)
    return alpha**2 + 4.0 * alpha * inv_r + 4.0 * inv_r2


def h0_shift_norm_sq_laplacian(state: HydrogenState) -> float:
    """||(-Delta + 1) psi||^2 by applying the radial Laplacian to R_nl directly."""
    n, l = state.n, state.l
    k = 2.0 / n
    poly = genlaguerre(n - l - 1, 2 * l + 1) * np.poly1d([1.0, 0.0]) ** l
    d1 = poly.deriv()
    d2 = d1.deriv()
    norm = _radial_norm(n, l)

    def integrand(r: float) -> float:
        rho = k * r
        p, p1, p2 = poly(rho), d1(rho), d2(rho)
        second = k**2 * (p2 - p1 + 0.25 * p)
        first = k * (p1 - 0.5 * p)
        # r * [(-d^2/dr^2 - (2/r) d/dr + l(l+1)/r^2 + 1) R]
        g = -r * second - 2.0 * first + l * (l + 1) * p / r + r * p
        return (norm * math.exp(-0.5 * rho) * g) ** 2

    return integrate_semi_infinite(integrand, 0.0, decay_rate=1.0 / n).value


# Shifted Coulomb potential, ground state

def coulomb_mean_shifted_closed_form(c: float) -> float:
    """N1(c) = (1 - exp(-2c)(1 + c)) / c."""
    c = abs(float(c))
    if c < SMALL_SHIFT:
        return 1.0 - 2.0 * c**2 / 3.0
    return (-math.expm1(-2.0 * c) - c * math.exp(-2.0 * c)) / c


def coulomb_mean_shifted(c: float) -> float:
    """N1(c) = -<psi_100| V(x - c e_z) |psi_100> = <1/r_>>, by quadrature.

    Decreasing in c from N1(0) = 1.
    """
    c = abs(float(c))
    if c < SMALL_SHIFT:
        return 1.0 - 2.0 * c**2 / 3.0
    inner = integrate(lambda r: r * r * math.exp(-2.0 * r), 0.0, c, breakpoints=_PEAK_BREAKS).value
    outer = integrate_semi_infinite(lambda r: r * math.exp(-2.0 * r), c, decay_rate=_TAIL_DECAY).value
    return 4.0 * inner / c + 4.0 * outer


@functools.lru_cache(maxsize=4096)
def _coulomb_sq_mean_shifted(c: float) -> float:
    inner = integrate(lambda r: r * math.exp(-2.0 * r) * 2.0 * math.atanh(r / c), 0.0, c, breakpoints=_PEAK_BREAKS).value
    outer = integrate_semi_infinite(
        lambda r: r * math.exp(-2.0 * r) * 2.0 * math.atanh(c / r) if r > c else 0.0,
        c,
        decay_rate=_TAIL_DECAY,
    ).value
    return 2.0 / c * (inner + outer)


def coulomb_sq_mean_shifted(c: float) -> float:
    """N2(c) = <psi_100| V(x - c e_z)^2 |psi_100>, from the logarithmic radial form.

    ln(1 + x) - ln(1 - x) is written as 2 atanh(x); the log singularity at
    r = c sits on the split between the two integrals. N2(0) = <1/r^2> = 2.
    """
    c = abs(float(c))
    if c < SMALL_SHIFT:
        return 2.0
    return _coulomb_sq_mean_shifted(c)


def _angular_2d(weight, c: float) -> float:
    """int_0^inf dr int_{-1}^{1} dmu weight(r, d(r, mu)), d = |x - c e_z|.

    The inner integral runs over u = ln d, where dmu = -d^2 du / (r c). The
    inverse powers of d in the shifted-Coulomb weights cancel against d^2,
    so the inner integrand stays bounded as r approaches c.
    """
    if c == 0.0:
        return integrate_semi_infinite(lambda r: 2.0 * weight(r, r), 0.0, decay_rate=_TAIL_DECAY).value

    def over_mu(r: float) -> float:
        gap = abs(r - c)
        if r <= 0.0 or gap == 0.0:
            return 0.0
        scale = 1.0 / (r * c)
        return integrate(
            lambda u: weight(r, math.exp(u)) * math.exp(2.0 * u) * scale,
            math.log(gap),
            math.log(r + c),
        ).value

    near = integrate(over_mu, 0.0, c).value
    far = integrate_semi_infinite(over_mu, c, decay_rate=_TAIL_DECAY).value
    return near + far


def coulomb_sq_mean_shifted_2d(c: float) -> float:
    """N2(c) by brute-force quadrature over (r, ln d)."""
    c = abs(float(c))
    return _angular_2d(lambda r, d: 2.0 * r * r * math.exp(-2.0 * r) / (d * d), c)


def coulomb_cross_term_closed_form(c: float) -> float:
    """<psi_100, V(x - c e_z) V(x) psi_100> = (1 - exp(-2c)(1 + 2c)) / c + 2 exp(-2c)."""
    c = abs(float(c))
    if c < SMALL_SHIFT:
        return 2.0 - 2.0 * c
    return (-math.expm1(-2.0 * c) - 2.0 * c * math.exp(-2.0 * c)) / c + 2.0 * math.exp(-2.0 * c)


CROSS_TERM_METHODS = ("2d", "radial")


def coulomb_cross_term(c: float, method: str = "2d") -> float:
    """<psi_100, V(x - c e_z) V(x) psi_100> by quadrature.

    ``"2d"`` integrates over (r, ln d); ``"radial"`` uses the angular
    average 1/r_> of the shifted potential and integrates 4 r exp(-2r) / r_>.
    """
    if method not in CROSS_TERM_METHODS:
        raise ValueError(f"Unknown cross-term method '{method}', expected one of {CROSS_TERM_METHODS}")
    c = abs(float(c))
    if c < SMALL_SHIFT:
        return coulomb_cross_term_closed_form(c)
    if method == "2d":
        return _angular_2d(lambda r, d: 2.0 * r * math.exp(-2.0 * r) / d, c)
    inner = integrate(lambda r: r * math.exp(-2.0 * r), 0.0, c, breakpoints=_PEAK_BREAKS).value
    outer = integrate_semi_infinite(lambda r: math.exp(-2.0 * r), c, decay_rate=_TAIL_DECAY).value
    return 4.0 * inner / c + 4.0 * outer


def shift_difference_norm(c: float, exact: bool = False, cross_term_method: str = "2d") -> MatrixElementValue:
    """||(V(x - c e_z) - V(x)) psi_100||.

    The estimate drops the nonnegative cross term: sqrt(N2(c) + 2) <= 2.
    The exact value keeps it: sqrt(N2(c) - 2 X(c) + 2).
    """
    c = abs(float(c))
    if not exact:
        return MatrixElementValue(math.sqrt(coulomb_sq_mean_shifted(c) + 2.0), Exactness.UPPER_ESTIMATE)
    if c == 0.0:
        return MatrixElementValue(0.0, Exactness.EXACT)
    # the norm grows like sqrt(c) near 0, so no small-shift shortcut here
    n2 = _coulomb_sq_mean_shifted(c)
    cross = coulomb_cross_term(c, cross_term_method)
    return MatrixElementValue(math.sqrt(max(n2 - 2.0 * cross + 2.0, 0.0)), Exactness.EXACT)
