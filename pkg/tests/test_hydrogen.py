import math

import pytest

from ionbounds.atom.hydrogen import (
    GROUND_STATE,
    Exactness,
    HydrogenState,
    coulomb_cross_term,
    coulomb_cross_term_closed_form,
    coulomb_mean_shifted,
    coulomb_mean_shifted_closed_form,
    coulomb_sq_mean_shifted,
    coulomb_sq_mean_shifted_2d,
    h0_shift_norm_sq,
    h0_shift_norm_sq_laplacian,
    h0_shift_norm_sq_printed,
    h0_shift_norm_sq_quadrature,
    inverse_r2_mean,
    inverse_r_mean,
    pfeifer_width,
    pz_norm_sq,
    r2_mean,
    radial_expectation,
    shift_difference_norm,
    z_norm_sq,
)

SHIFT_GRID = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0]
STATES_UP_TO_5 = [HydrogenState(n, l) for n in range(1, 6) for l in range(n)]


def state_id(state):
    return f"{state.n}{state.l}"


@pytest.mark.parametrize("n, l, m", [(0, 0, 0), (2, 2, 0), (2, 1, 2), (3, -1, 0)])
def test_invalid_quantum_numbers(n, l, m):
    with pytest.raises(ValueError):
        HydrogenState(n, l, m)


def test_energy_and_parse():
    state = HydrogenState.parse("3, 2, -1")
    assert state == HydrogenState(3, 2, -1)
    assert state.energy == pytest.approx(-1.0 / 18.0)
    assert HydrogenState.parse("2,1") == HydrogenState(2, 1, 0)
    with pytest.raises(ValueError):
        HydrogenState.parse("1")
    with pytest.raises(ValueError):
        HydrogenState.parse("a,b,c")


def test_pz_norm_sq():
    assert pz_norm_sq(GROUND_STATE).value == pytest.approx(1.0 / 3.0)
    assert pz_norm_sq(GROUND_STATE).is_exact
    assert pz_norm_sq(HydrogenState(3, 0, 0)).value == pytest.approx(1.0 / 27.0)
    excited = pz_norm_sq(HydrogenState(2, 1, 0))
    assert excited.value == pytest.approx(0.25)
    assert excited.exactness is Exactness.UPPER_ESTIMATE


@pytest.mark.parametrize("state, expected", [(HydrogenState(1), 3.0), (HydrogenState(2, 1, 1), 30.0), (HydrogenState(2), 42.0)])
def test_r2_mean(state, expected):
    assert r2_mean(state) == expected


def test_z_norm_sq():
    assert z_norm_sq(GROUND_STATE).value == pytest.approx(1.0)
    assert z_norm_sq(HydrogenState(2)).value == pytest.approx(14.0)
    p_state = z_norm_sq(HydrogenState(2, 1, 0))
    assert p_state.value == 30.0
    assert not p_state.is_exact


def test_pfeifer_width_is_z_norm():
    assert pfeifer_width(HydrogenState(2)).value == pytest.approx(math.sqrt(14.0))


def test_h0_shift_norm_ground_state():
    assert h0_shift_norm_sq(GROUND_STATE) == 8.0
    assert h0_shift_norm_sq_printed(GROUND_STATE) == 8.0


def test_h0_shift_norm_excited_state():
    state = HydrogenState(2, 1, 0)
    assert h0_shift_norm_sq(state) == pytest.approx(1.0 + 0.5 - 3.0 / 16.0 + 1.0 / 3.0, abs=1e-15)
    assert h0_shift_norm_sq_printed(state) == pytest.approx(1.2708333333, abs=1e-9)


def test_h0_shift_norm_large_n():
    n = 200
    assert h0_shift_norm_sq(HydrogenState(n)) == pytest.approx(1.0, abs=3.0 / n**2)


@pytest.mark.parametrize("state", STATES_UP_TO_5, ids=state_id)
def test_radial_oracle_matches_closed_forms(state):
    n, l = state.n, state.l
    assert radial_expectation(n, l, 0) == pytest.approx(1.0, abs=1e-10)
    assert radial_expectation(n, l, -1) == pytest.approx(inverse_r_mean(state), abs=1e-8)
    assert radial_expectation(n, l, -2) == pytest.approx(inverse_r2_mean(state), abs=1e-8)
    assert radial_expectation(n, l, 2) == pytest.approx(r2_mean(state), rel=1e-8)


@pytest.mark.parametrize("state", STATES_UP_TO_5, ids=state_id)
def test_h0_shift_norm_matches_quadrature(state):
    closed = h0_shift_norm_sq(state)
    assert h0_shift_norm_sq_quadrature(state) == pytest.approx(closed, abs=1e-8)
    assert h0_shift_norm_sq_laplacian(state) == pytest.approx(closed, abs=1e-8)


def test_printed_form_underestimates_for_excited_states():
    for state in STATES_UP_TO_5[1:]:
        assert h0_shift_norm_sq_printed(state) < h0_shift_norm_sq(state)


@pytest.mark.parametrize("c", SHIFT_GRID)
def test_n1_quadrature_matches_closed_form(c):
    assert coulomb_mean_shifted(c) == pytest.approx(coulomb_mean_shifted_closed_form(c), abs=1e-10)


def test_n1_values():
    assert coulomb_mean_shifted(0.0) == 1.0
    assert coulomb_mean_shifted(1e-9) == pytest.approx(1.0, abs=1e-8)
    assert coulomb_mean_shifted(1.0) == pytest.approx(1.0 - 2.0 * math.exp(-2.0), abs=1e-10)
    assert coulomb_mean_shifted(2.0) < coulomb_mean_shifted(1.0)


def test_n2_limit():
    assert coulomb_sq_mean_shifted(0.0) == 2.0
    assert coulomb_sq_mean_shifted(1e-9) == pytest.approx(2.0, abs=1e-8)
    assert coulomb_sq_mean_shifted(1e-3) == pytest.approx(2.0, abs=1e-2)


def test_shifted_means_strictly_decrease():
    n1 = [coulomb_mean_shifted(c) for c in SHIFT_GRID]
    n2 = [coulomb_sq_mean_shifted(c) for c in SHIFT_GRID]
    for values in (n1, n2):
        for a, b in zip(values, values[1:]):
            assert a - b > 1e-9
    assert all(v <= 2.0 for v in n2)


def test_n2_matches_angular_oracle():
    assert coulomb_sq_mean_shifted(1.0) == pytest.approx(coulomb_sq_mean_shifted_2d(1.0), abs=1e-8)


@pytest.mark.parametrize("c", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("method", ["2d", "radial"])
def test_cross_term_matches_closed_form(c, method):
    assert coulomb_cross_term(c, method) == pytest.approx(coulomb_cross_term_closed_form(c), abs=1e-8)


def test_cross_term_rejects_unknown_method():
    with pytest.raises(ValueError):
        coulomb_cross_term(1.0, "3d")


def test_shift_estimate():
    at_zero = shift_difference_norm(0.0)
    assert at_zero.value == 2.0
    assert at_zero.exactness is Exactness.UPPER_ESTIMATE
    assert shift_difference_norm(5.0).value < 2.0
    for c in SHIFT_GRID:
        assert shift_difference_norm(c).value < 2.0


def test_shift_exact():
    at_zero = shift_difference_norm(0.0, exact=True)
    assert at_zero.value == 0.0
    assert at_zero.is_exact
    for c in (0.1, 0.5, 1.0, 5.0):
        exact = shift_difference_norm(c, exact=True, cross_term_method="radial").value
        assert 0.0 < exact <= shift_difference_norm(c).value


def test_shift_exact_two_dimensional_agrees_with_radial():
    two_d = shift_difference_norm(1.0, exact=True, cross_term_method="2d").value
    radial = shift_difference_norm(1.0, exact=True, cross_term_method="radial").value
    assert two_d == pytest.approx(radial, abs=1e-7)


def test_shift_exact_far_limit():
    # the cross term decays like 1/c, so the limit is only reached at large shifts
    value = shift_difference_norm(2000.0, exact=True, cross_term_method="radial").value
    assert value < math.sqrt(2.0)
    assert value == pytest.approx(math.sqrt(2.0), abs=1e-3)


@pytest.mark.parametrize("c", [0.2, 2.0, 3.0, 7.5])
def test_n2_angular_oracle_across_shifts(c):
    assert coulomb_sq_mean_shifted_2d(c) == pytest.approx(coulomb_sq_mean_shifted(c), abs=1e-8)


def test_n2_angular_oracle_without_shift():
    assert coulomb_sq_mean_shifted_2d(0.0) == pytest.approx(2.0, abs=1e-10)


@pytest.mark.parametrize("c", [2.0, 3.0, 7.5, 20.0])
def test_two_dimensional_cross_term_at_larger_shifts(c):
    assert coulomb_cross_term(c, "2d") == pytest.approx(coulomb_cross_term_closed_form(c), abs=1e-8)


@pytest.mark.parametrize("c", [0.5, 3.0, 10.0])
def test_shift_exact_default_method_agrees_with_radial(c):
    two_d = shift_difference_norm(c, exact=True).value
    radial = shift_difference_norm(c, exact=True, cross_term_method="radial").value
    assert two_d == pytest.approx(radial, abs=1e-7)
