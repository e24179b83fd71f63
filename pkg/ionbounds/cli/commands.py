"""Command implementations behind the ``ionbounds`` CLI.

Every number written here comes from the library modules; this layer only
chooses parameters, orders rows and formats output.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..atom.hydrogen import (
    GROUND_STATE,
    HydrogenState,
    coulomb_mean_shifted_closed_form,
    coulomb_sq_mean_shifted,
    h0_shift_norm_sq,
    h0_shift_norm_sq_printed,
    shift_difference_norm,
)
from ..atom.kato import (
    RESOLVENT_CONSTANT,
    ROUNDED_LITERATURE_CONSTANT,
    apriori_constant,
    generic_first_term_coefficient,
    optimize_resolvent_bound,
)
from ..bounds.engine import (
    BoundKind,
    BoundReport,
    ShiftMode,
    StateData,
    evaluate_all,
    lower_bound,
    state_data_for,
    upper_bound_2,
)
from ..pulse.shapes import ConstantPulse, CosinePulse, DeltaKick, Pulse, RampedCosinePulse, from_config
from ..utils.config import DEFAULT_FIGURE_SAMPLES, SweepConfig, load_json, locate
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

FIGURE1_OMEGA = 1.5
FIGURE1_FIELDS = (5.0, 10.0, 20.0)
FIGURE2_E0 = 10.0
FIGURE2_OMEGA = 50.0
FIGURE2_CYCLES = 4

BOUND_ORDER = tuple(BoundKind)


def fmt(value: float) -> str:
    return f"{value:.17g}"


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.info("Wrote %d rows to %s", count, path)
    return count


def load_pulse(path: str) -> Pulse:
    try:
        return from_config(load_json(path))
    except ConfigError as exc:
        raise locate(exc, path) from None


def make_state_data(state: HydrogenState, shift_mode: str) -> StateData:
    try:
        return state_data_for(state, ShiftMode(shift_mode))
    except ValueError as exc:
        raise ConfigError(str(exc), field="shift_mode") from None


def cosine_or_empty(E0: float, omega: float, tau: float) -> Pulse:
    """Cosine pulse of duration tau; tau = 0 is the empty pulse (a kick of strength 0)."""
    if tau == 0.0:
        return DeltaKick(F0=0.0)
    return CosinePulse(E0=E0, omega=omega, tau=tau)


# report

def report_rows(reports: Sequence[BoundReport]) -> List[List[str]]:
    rows = []
    for r in reports:
        terms = ";".join(f"{name}={fmt(value)}" for name, value in r.terms)
        rows.append([r.kind.value, "true" if r.valid else "false", fmt(r.raw), fmt(r.clipped), r.validity_reason, terms])
    return rows


REPORT_HEADER = ("kind", "valid", "value_raw", "value_clipped", "validity_reason", "terms")


def format_report(reports: Sequence[BoundReport], pulse: Pulse, state_data: StateData) -> str:
    lines = [f"pulse: {pulse.to_config()}", f"state: {state_data.label} (shift mode {state_data.shift_mode.value})"]
    lines.append(f"{'kind':<8} {'valid':<6} {'raw':>14} {'clipped':>10}  terms")
    for r in reports:
        terms = ", ".join(f"{name}={value:.6g}" for name, value in r.terms) or r.validity_reason
        lines.append(f"{r.kind.value:<8} {str(r.valid).lower():<6} {r.raw:>14.8g} {r.clipped:>10.6f}  {terms}")
    return "\n".join(lines)


def cmd_report(
    pulse: Pulse,
    state: HydrogenState = GROUND_STATE,
    drop_spreading: bool = False,
    shift_mode: str = "estimate",
    output_path: Optional[str] = None,
) -> Tuple[List[BoundReport], str]:
    state_data = make_state_data(state, shift_mode)
    reports = evaluate_all(pulse, state_data, drop_spreading)
    if output_path:
        write_csv(output_path, REPORT_HEADER, report_rows(reports))
    return reports, format_report(reports, pulse, state_data)


# figures

def tau_grid(end: float, samples: int) -> np.ndarray:
    return np.linspace(0.0, end, samples)


def _figure1_row(tau: float, state_data: StateData) -> List[str]:
    row = [fmt(tau)]
    for E0 in FIGURE1_FIELDS:
        pulse = cosine_or_empty(E0, FIGURE1_OMEGA, tau)
        upper = upper_bound_2(pulse, state_data, drop_spreading=True)
        lower = lower_bound(pulse, state_data, drop_spreading=True)
        row += [fmt(upper.raw), fmt(upper.clipped), fmt(lower.raw), fmt(lower.clipped)]
    return row


def figure1_header() -> List[str]:
    header = ["tau"]
    for E0 in FIGURE1_FIELDS:
        label = f"E0_{E0:g}"
        header += [f"upper_{label}_raw", f"upper_{label}_clipped", f"lower_{label}_raw", f"lower_{label}_clipped"]
    return header


def cmd_figure1(output_path: str, samples: int = DEFAULT_FIGURE_SAMPLES, workers: int = 1) -> int:
    """Upper and lower bounds over one cycle of E0 cos(1.5 t), spreading term dropped."""
    state_data = state_data_for(GROUND_STATE)
    grid = tau_grid(2.0 * math.pi / FIGURE1_OMEGA, samples)
    rows = _map(lambda tau: _figure1_row(float(tau), state_data), grid, workers)
    return write_csv(output_path, figure1_header(), rows)


def figure2_header() -> List[str]:
    return ["tau", "upper_raw", "upper_clipped"]


def cmd_figure2(
    output_path: str,
    samples: int = DEFAULT_FIGURE_SAMPLES,
    include_spreading: bool = True,
    workers: int = 1,
) -> int:
    """Upper bound over the first four cycles of 10 cos(50 t)."""
    state_data = state_data_for(GROUND_STATE)
    grid = tau_grid(2.0 * math.pi * FIGURE2_CYCLES / FIGURE2_OMEGA, samples)

    def row(tau: float) -> List[str]:
        pulse = cosine_or_empty(FIGURE2_E0, FIGURE2_OMEGA, float(tau))
        upper = upper_bound_2(pulse, state_data, drop_spreading=not include_spreading)
        return [fmt(float(tau)), fmt(upper.raw), fmt(upper.clipped)]

    return write_csv(output_path, figure2_header(), _map(row, grid, workers))


# constants

CONSTANTS_SHIFT_GRID = (0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0)
CONSTANTS_MAX_N = 10


def constants_report() -> str:
    optimum = optimize_resolvent_bound()
    lines = [
        "Coulomb resolvent norm ||r^-1 (-Delta + 1)^-1||",
        f"  optimised bound            {optimum.value:.12f}  (rho={optimum.params.rho:.9f}, R={optimum.params.R:.9f})",
        f"  closed form                {RESOLVENT_CONSTANT:.12f}",
        f"  relative difference        {optimum.relative_error:.3e}",
        f"  rounded literature value   {ROUNDED_LITERATURE_CONSTANT:.2f}  (below the closed form by {RESOLVENT_CONSTANT - ROUNDED_LITERATURE_CONSTANT:.5f})",
        f"  a-priori constant          {apriori_constant():.12f}",
        "",
        "First-term coefficient K(n, l), T1 <= K tau",
        f"  {'n':>3} {'l':>3} {'K':>12} {'||(2H0+1)psi||^2':>18} {'printed form':>14}",
    ]
    for n in range(1, CONSTANTS_MAX_N + 1):
        for l in range(n):
            state = HydrogenState(n, l)
            lines.append(
                f"  {n:>3} {l:>3} {generic_first_term_coefficient(state):>12.6f}"
                f" {h0_shift_norm_sq(state):>18.6f} {h0_shift_norm_sq_printed(state):>14.6f}"
            )
    estimates = [shift_difference_norm(c).value for c in CONSTANTS_SHIFT_GRID]
    worst = max(estimates)
    lines += [
        "",
        "Shifted Coulomb potential, ground state",
        f"  {'c':>6} {'N1':>14} {'N2':>14} {'sqrt(N2+2)':>12}",
    ]
    for c, estimate in zip(CONSTANTS_SHIFT_GRID, estimates):
        lines.append(
            f"  {c:>6g} {coulomb_mean_shifted_closed_form(c):>14.10f} {coulomb_sq_mean_shifted(c):>14.10f} {estimate:>12.8f}"
        )
    lines.append(f"  shift-norm estimate: max over c-grid {worst:.10f} {'<=' if worst <= 2.0 else '>'} 2")
    return "\n".join(lines)


def cmd_constants(output_path: Optional[str] = None) -> str:
    text = constants_report()
    if output_path:
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info("Wrote constants report to %s", output_path)
    return text


# sweep

@dataclass(frozen=True)
class SweepPoint:
    E0: float
    omega: float
    tau: float


def sweep_points(config: SweepConfig) -> List[SweepPoint]:
    return [
        SweepPoint(E0, omega, tau)
        for E0 in config.E0
        for omega in config.omega
        for tau in config.durations(omega)
    ]


def sweep_pulse(config: SweepConfig, point: SweepPoint) -> Pulse:
    if point.tau == 0.0:
        return DeltaKick(F0=0.0)
    if config.shape == "constant":
        return ConstantPulse(E0=point.E0, tau=point.tau)
    if config.shape == "cosine_ramped":
        return RampedCosinePulse(E0=point.E0, omega=point.omega, tau=point.tau, ramp_cycles=config.ramp_cycles)
    return CosinePulse(E0=point.E0, omega=point.omega, tau=point.tau)


def sweep_header() -> List[str]:
    header = ["E0", "omega", "tau"]
    for kind in BOUND_ORDER:
        header += [f"{kind.value}_raw", f"{kind.value}_clipped", f"{kind.value}_valid"]
    return header


def cmd_sweep(
    config: SweepConfig,
    output_path: str,
    state: HydrogenState = GROUND_STATE,
    drop_spreading: bool = False,
    shift_mode: str = "estimate",
    workers: int = 1,
) -> int:
    state_data = make_state_data(state, shift_mode)
    points = sweep_points(config)
    logger.debug("sweep over %d points with %d worker(s)", len(points), workers)
    try:
        pulses = [sweep_pulse(config, p) for p in points]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    def row(item: Tuple[SweepPoint, Pulse]) -> List[str]:
        point, pulse = item
        cells = [fmt(point.E0), fmt(point.omega), fmt(point.tau)]
        for r in evaluate_all(pulse, state_data, drop_spreading):
            cells += [fmt(r.raw), fmt(r.clipped), "true" if r.valid else "false"]
        return cells

    return write_csv(output_path, sweep_header(), _map(row, list(zip(points, pulses)), workers))


def _map(fn, items: Sequence[Any], workers: int) -> List[Any]:
    """Ordered map, threaded when ``workers`` > 1."""
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def reports_by_kind(reports: Sequence[BoundReport]) -> Mapping[BoundKind, BoundReport]:
    return {r.kind: r for r in reports}
