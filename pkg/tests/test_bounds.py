import math

import numpy as np
import pytest

from ionbounds.atom.hydrogen import GROUND_STATE, HydrogenState
from ionbounds.atom.kato import generic_first_term_coefficient
from ionbounds.bounds.engine import (
    BoundKind,
    ShiftMode,
    evaluate_all,
    first_order_pert_bound,
    lower_bound,
    pfeifer_bound,
    spreading_term,
    stabilization_limit_check,
    state_data_for,
    upper_bound_1,
    upper_bound_2,
)
from ionbounds.pulse.shapes import (
    ConstantPulse,
    CosinePulse,
    DeltaKick,
    RampedCosinePulse,
    TabulatedPulse,
    displacement,
    displacement_by_parts,
    integer_cycle_duration,
    momentum_transfer,
)

OMEGA = 1.5
QUARTER = math.pi / 2.0 / OMEGA
SQRT3 = math.sqrt(3.0)


@pytest.fixture(scope="module")
def ground():
    return state_data_for(GROUND_STATE)


def recombined(report):
    amp = report.amplitude
    return 1.0 - amp**2 if report.kind is BoundKind.LOWER else amp**2


def test_zero_pulse_exact_mode():
    data = state_data_for(GROUND_STATE, ShiftMode.EXACT)
    zero = ConstantPulse(E0=0.0, tau=1.0)
    upper = upper_bound_1(zero, data)
    assert upper.valid
    assert upper.raw == 0.0
    assert upper.clipped == 0.0
    assert upper_bound_2(zero, data).raw == 0.0
    assert not lower_bound(zero, data).valid
    assert pfeifer_bound(zero, data).raw == 0.0
    assert first_order_pert_bound(zero, data).raw == 0.0


def test_zero_pulse_estimate_mode_without_spreading(ground):
    zero = ConstantPulse(E0=0.0, tau=1.0)
    assert upper_bound_1(zero, ground, drop_spreading=True).raw == 0.0
    assert upper_bound_1(zero, ground).raw == pytest.approx(4.0)


def test_integer_cycle_upper_bound_is_spreading_only(ground):
    tau = integer_cycle_duration(OMEGA, 1)
    report = upper_bound_1(CosinePulse(E0=5.0, omega=OMEGA, tau=tau), ground)
    assert report.valid
    assert report.raw == pytest.approx((2.0 * tau) ** 2, rel=1e-12)
    assert report.term("displacement") < 1e-14
    assert report.term("momentum") < 1e-14
    assert report.clipped == 1.0


def test_upper_bound_1_needs_small_energy_transfer(ground):
    report = upper_bound_1(CosinePulse(E0=5.0, omega=OMEGA, tau=QUARTER), ground)
    assert not report.valid
    assert math.isnan(report.raw)
    assert "energy transfer" in report.validity_reason
    assert report.terms == ()


@pytest.mark.parametrize("E0, tau", [(5.0, 0.3), (20.0, QUARTER), (10.0, 2.0)])
def test_upper_bound_2_hydrogen_closed_form(ground, E0, tau):
    pulse = CosinePulse(E0=E0, omega=OMEGA, tau=tau)
    b, c = momentum_transfer(pulse, tau), displacement(pulse, tau)
    expected = (2.0 * tau + abs(b) + abs(c) / SQRT3) ** 2
    assert upper_bound_2(pulse, ground).raw == pytest.approx(expected, rel=1e-12)


def test_upper_bound_2_short_pulse(ground):
    pulse = CosinePulse(E0=5.0, omega=OMEGA, tau=0.1 / OMEGA)
    report = upper_bound_2(pulse, ground, drop_spreading=True)
    assert report.term("momentum_width") == pytest.approx(0.33278, abs=1e-5)
    assert report.term("displacement") == pytest.approx(0.00641, abs=1e-5)
    assert report.raw == pytest.approx(0.115, abs=5e-4)


@pytest.mark.parametrize("E0", [20.0, 40.0])
def test_lower_bound_hydrogen_closed_form(ground, E0):
    tau = QUARTER
    pulse = CosinePulse(E0=E0, omega=OMEGA, tau=tau)
    b = momentum_transfer(pulse, tau)
    expected = 1.0 - (2.0 * tau + 4.0 / (b * b - 1.0) + (2.0 / SQRT3) * abs(b) / (b * b - 1.0)) ** 2
    report = lower_bound(pulse, ground)
    assert report.valid
    assert report.raw == pytest.approx(expected, rel=1e-12)
    assert report.clipped == 0.0


def test_lower_bound_quarter_cycle(ground):
    report = lower_bound(CosinePulse(E0=20.0, omega=OMEGA, tau=QUARTER), ground, drop_spreading=True)
    assert report.term("shift_at_end") == pytest.approx(0.022628, abs=1e-6)
    assert report.term("momentum") == pytest.approx(0.087090, abs=1e-5)
    assert report.clipped == pytest.approx(0.98796, abs=1e-4)


def test_lower_bound_needs_large_energy_transfer(ground):
    report = lower_bound(CosinePulse(E0=0.5, omega=OMEGA, tau=QUARTER), ground)
    assert not report.valid
    assert math.isnan(report.clipped)


def test_delta_kick(ground):
    reports = {r.kind: r for r in evaluate_all(DeltaKick(F0=2.0), ground)}
    assert reports[BoundKind.LOWER].valid
    assert reports[BoundKind.LOWER].raw < 0.0
    assert reports[BoundKind.LOWER].clipped == 0.0
    assert not reports[BoundKind.UPPER1].valid
    assert reports[BoundKind.UPPER2].raw == pytest.approx(4.0)
    assert reports[BoundKind.PFEIFER].raw == pytest.approx(4.0)


def test_pfeifer_constant_pulse(ground):
    pulse = ConstantPulse(E0=3.0, tau=0.2)
    assert pfeifer_bound(pulse, ground).raw == pytest.approx(0.36, rel=1e-10)
    assert first_order_pert_bound(pulse, ground).raw == pytest.approx(0.36, rel=1e-12)


def test_pfeifer_full_cycle(ground):
    pulse = CosinePulse(E0=0.1, omega=OMEGA, tau=integer_cycle_duration(OMEGA, 1))
    assert pfeifer_bound(pulse, ground).raw == pytest.approx((0.4 / OMEGA) ** 2, rel=1e-9)
    assert first_order_pert_bound(pulse, ground).raw < 1e-25


def test_first_order_never_exceeds_pfeifer(ground):
    rng = np.random.default_rng(7)
    for _ in range(100):
        if rng.random() < 0.5:
            pulse = CosinePulse(E0=float(rng.uniform(-20, 20)), omega=float(rng.uniform(0.5, 50)), tau=float(rng.uniform(0.05, 10)))
        else:
            times = np.sort(rng.uniform(0.0, 3.0, size=6))
            values = rng.normal(size=6)
            pulse = TabulatedPulse(samples=tuple(zip(times.tolist(), values.tolist())), tau=3.0)
        pert = first_order_pert_bound(pulse, ground).raw
        pfeifer = pfeifer_bound(pulse, ground).raw
        assert pert <= pfeifer + 1e-9 * max(1.0, pfeifer)


def test_stabilization_floor(ground):
    assert stabilization_limit_check(ground, 0.1) == pytest.approx(0.96)
    assert stabilization_limit_check(ground, 0.0) == 1.0
    assert stabilization_limit_check(ground, 0.5) == 0.0


@pytest.mark.parametrize("mode", list(ShiftMode))
def test_upper_bounds_share_the_first_two_terms(mode):
    data = state_data_for(GROUND_STATE, mode)
    pulse = CosinePulse(E0=0.3, omega=OMEGA, tau=0.8)
    first, second = upper_bound_1(pulse, data), upper_bound_2(pulse, data)
    assert first.valid and second.valid
    assert first.term("spreading") == second.term("spreading")
    assert first.term("displacement") == second.term("displacement")


def test_validity_regions_do_not_overlap(ground):
    for E0 in (0.1, 0.5, 1.0, 1.5, 3.0, 20.0):
        for tau in np.linspace(0.05, integer_cycle_duration(OMEGA, 1), 25):
            pulse = CosinePulse(E0=E0, omega=OMEGA, tau=float(tau))
            assert not (upper_bound_1(pulse, ground, True).valid and lower_bound(pulse, ground, True).valid)


def test_integer_cycles_are_field_independent(ground):
    tau = integer_cycle_duration(OMEGA, 2)
    raws = [upper_bound_2(CosinePulse(E0=E0, omega=OMEGA, tau=tau), ground).raw for E0 in (5.0, 10.0, 20.0)]
    assert max(raws) - min(raws) < 1e-10


def test_lower_bound_increases_with_field(ground):
    values = [
        lower_bound(CosinePulse(E0=E0, omega=OMEGA, tau=QUARTER), ground, drop_spreading=True).raw
        for E0 in (5.0, 10.0, 20.0, 40.0, 80.0, 160.0)
    ]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 0.999


def test_lower_bound_approaches_the_floor(ground):
    tau = 0.1
    floor = stabilization_limit_check(ground, tau)
    values = [lower_bound(CosinePulse(E0=E0, omega=OMEGA, tau=tau), ground).raw for E0 in (1e3, 1e4, 1e5)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert all(v <= floor for v in values)
    assert values[-1] > 1.0 - (2.0 * tau) ** 2 * 1.01


def test_terms_reproduce_raw(ground):
    for pulse in (CosinePulse(E0=0.3, omega=OMEGA, tau=0.8), CosinePulse(E0=20.0, omega=OMEGA, tau=QUARTER)):
        for report in evaluate_all(pulse, ground):
            if report.valid:
                assert recombined(report) == pytest.approx(report.raw, abs=1e-12)
                assert 0.0 <= report.clipped <= 1.0


def test_evaluate_all_order(ground):
    kinds = [r.kind for r in evaluate_all(ConstantPulse(E0=1.0, tau=0.1), ground)]
    assert kinds == [BoundKind.UPPER1, BoundKind.UPPER2, BoundKind.LOWER, BoundKind.PFEIFER, BoundKind.PERT1]


def test_sharper_spreading_modes():
    pulse = CosinePulse(E0=5.0, omega=OMEGA, tau=1.0)
    estimate = spreading_term(pulse, state_data_for(GROUND_STATE, ShiftMode.ESTIMATE))
    quadrature = spreading_term(pulse, state_data_for(GROUND_STATE, ShiftMode.QUADRATURE))
    exact = spreading_term(pulse, state_data_for(GROUND_STATE, ShiftMode.EXACT))
    assert estimate == pytest.approx(2.0)
    assert exact < quadrature < estimate


def test_excited_states_use_the_kato_coefficient():
    state = HydrogenState(2, 1, 0)
    data = state_data_for(state)
    assert data.generic_shift_constant == pytest.approx(generic_first_term_coefficient(state))
    assert data.energy == pytest.approx(-0.125)
    assert not data.pz_norm.is_exact
    with pytest.raises(ValueError):
        state_data_for(state, ShiftMode.EXACT)


def test_state_data_accepts_mode_names():
    assert state_data_for(GROUND_STATE, "quadrature").shift_mode is ShiftMode.QUADRATURE


ALL_SHAPES = [
    CosinePulse(E0=20.0, omega=OMEGA, tau=QUARTER),
    RampedCosinePulse(E0=10.0, omega=2.0, tau=4.0 * math.pi, ramp_cycles=1.0),
    ConstantPulse(E0=-2.0, tau=0.4),
    DeltaKick(F0=1.5),
    TabulatedPulse(samples=((0.0, 0.0), (0.3, 8.0), (0.6, -4.0), (0.9, 0.0)), tau=1.0),
]
SHAPE_IDS = ["cosine", "ramped", "constant", "kick", "tabulated"]


@pytest.mark.parametrize("pulse", ALL_SHAPES, ids=SHAPE_IDS)
@pytest.mark.parametrize("drop_spreading", [True, False])
def test_every_shape_through_evaluate_all(ground, pulse, drop_spreading):
    reports = evaluate_all(pulse, ground, drop_spreading=drop_spreading)
    assert len(reports) == 5
    for report in reports:
        if report.valid:
            assert math.isfinite(report.raw)
            assert 0.0 <= report.clipped <= 1.0
            assert recombined(report) == pytest.approx(report.raw, abs=1e-12)
        else:
            assert math.isnan(report.raw) and math.isnan(report.clipped)
    tau = pulse.duration
    assert displacement(pulse, tau) == pytest.approx(displacement_by_parts(pulse, tau), abs=1e-9)


def test_tabulated_pulse_with_integrated_shift_norm():
    pulse = ALL_SHAPES[4]
    data = state_data_for(GROUND_STATE, ShiftMode.QUADRATURE)
    estimate = spreading_term(pulse, state_data_for(GROUND_STATE))
    assert 0.0 < spreading_term(pulse, data) <= estimate + 1e-12
