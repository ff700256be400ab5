import math

import numpy as np
import pytest

from prft.domain.entities import (
    CountingGrid,
    CountingPoints,
    CountingStencil,
    DrivenSystem,
    FockWindow,
    GeneralizedPropagatorSet,
    GeneratingFunctionSamples,
    MatterState,
    ModeSpec,
    PhotonicInitialState,
    PhysicalUnits,
    ProtocolState,
    common_frequency,
    fold_quasienergy,
)
from prft.domain.exceptions import (
    BranchError,
    CommensurabilityError,
    InvalidGridError,
    InvalidStateError,
    InvalidSystemError,
    ProtocolConfigurationError,
    WindowError,
)
from prft.domain.services import ModelFactory, spin_half_operators


# ---------------------------------------------------------------- modes


def test_mode_spec_from_bare_coupling():
    mode = ModeSpec(1.0, bare_coupling=0.01, amplitude=30.0)
    assert mode.coupling == pytest.approx(0.3)
    assert mode.mean_photons == pytest.approx(900.0)


def test_mode_spec_infers_bare_coupling_from_amplitude():
    mode = ModeSpec(1.0, coupling=0.2, amplitude=40.0)
    assert mode.bare_coupling == pytest.approx(0.005)


def test_mode_spec_phase_is_stored_modulo_two_pi():
    mode = ModeSpec(1.0, coupling=0.1, phase=-math.pi / 2)
    assert mode.phase == pytest.approx(3 * math.pi / 2)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"coupling": 0.1, "bare_coupling": 0.01, "amplitude": 10.0},
        {},
        {"bare_coupling": 0.01},
        {"coupling": 0.1, "amplitude": -1.0},
        {"coupling": float("nan")},
    ],
)
def test_mode_spec_rejects_inconsistent_couplings(kwargs):
    with pytest.raises(InvalidSystemError):
        ModeSpec(1.0, **kwargs)


@pytest.mark.parametrize("frequency", [0.0, -1.0, float("inf")])
def test_mode_spec_rejects_non_positive_frequency(frequency):
    with pytest.raises(InvalidSystemError):
        ModeSpec(frequency, coupling=0.1)


# ---------------------------------------------------------------- matter


def test_matter_state_requires_normalization():
    with pytest.raises(InvalidStateError):
        MatterState([0.9, 0.0])
    state = MatterState.normalized([1.0, 1.0j])
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-14)


def test_matter_state_spin_basis_order():
    up = MatterState.spin_up()
    sz = spin_half_operators()["z"]
    assert np.vdot(up.amplitudes, sz @ up.amplitudes).real == pytest.approx(1.0)
    assert MatterState.spin_down().amplitudes[1] == 1.0


def test_matter_state_amplitudes_are_read_only():
    state = MatterState.spin_up()
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


# ---------------------------------------------------------------- photonic


def test_coherent_state_ties_variance_to_mean():
    state = PhotonicInitialState(400.0)
    assert state.variance == 400.0
    with pytest.raises(InvalidStateError):
        PhotonicInitialState(400.0, variance=100.0, family="coherent")


def test_squeezed_state_needs_variance():
    with pytest.raises(InvalidStateError):
        PhotonicInitialState(1000.0, family="gaussian-squeezed")
    state = PhotonicInitialState(1000.0, variance=100.0, family="gaussian-squeezed")
    assert state.sigma == pytest.approx(10.0)


@pytest.mark.parametrize("phase", [0.0, 0.7, 2.5])
def test_photonic_amplitudes_carry_linear_phase(phase):
    state = PhotonicInitialState(100.0, phase=phase)
    n = np.arange(50, 151)
    amplitudes = state.amplitudes(n)
    assert np.linalg.norm(amplitudes) == pytest.approx(1.0)
    ratio = amplitudes[1:] / amplitudes[:-1]
    assert np.allclose(np.angle(ratio * np.exp(1j * phase)), 0.0, atol=1e-12)
    assert n[np.argmax(np.abs(amplitudes))] == 100


def test_window_bounds_use_eight_sigma_or_minimum():
    assert PhotonicInitialState(1000.0, variance=100.0, family="gaussian-squeezed").window_bounds() == (920, 1080)
    assert PhotonicInitialState(1000.0, variance=400.0, family="gaussian-squeezed").window_bounds() == (840, 1160)
    assert PhotonicInitialState(10.0).window_bounds() == (0, 50)


# ---------------------------------------------------------------- systems


@pytest.mark.parametrize(
    "frequencies, expected",
    [([1.0, 2.0, 3.0], 1.0), ([2.0, 3.0], 1.0), ([1.0, 1.5], 0.5), ([4.0], 4.0)],
)
def test_common_frequency(frequencies, expected):
    assert common_frequency(frequencies) == pytest.approx(expected)


def test_incommensurate_frequencies_have_no_period():
    with pytest.raises(CommensurabilityError):
        common_frequency([1.0, math.sqrt(2.0)])
    ops = spin_half_operators()
    modes = [ModeSpec(1.0, coupling=0.1), ModeSpec(math.sqrt(2.0), coupling=0.1)]
    system = DrivenSystem(0.5 * ops["z"], [ops["x"], ops["x"]], modes, require_period=False)
    assert system.period is None
    with pytest.raises(CommensurabilityError):
        system.require_period()


def test_driven_system_rejects_non_hermitian_inputs():
    ops = spin_half_operators()
    mode = ModeSpec(1.0, coupling=0.1)
    with pytest.raises(InvalidSystemError):
        DrivenSystem(np.array([[0.0, 1.0], [0.0, 0.0]]), [ops["x"]], [mode])
    with pytest.raises(InvalidSystemError):
        DrivenSystem(0.5 * ops["z"], [ops["+"]], [mode])


def test_driven_system_rejects_dimension_mismatch():
    ops = spin_half_operators()
    with pytest.raises(InvalidSystemError):
        DrivenSystem(np.eye(3), [ops["x"]], [ModeSpec(1.0, coupling=0.1)])


def test_rabi_hamiltonian_is_cosine_drive(rabi_system):
    ops = spin_half_operators()
    t = 0.37
    h = rabi_system.hamiltonian(t, np.zeros((1, 1)))[0]
    expected = 0.5 * ops["z"] + 2 * 0.3 * math.cos(2.0 * t + 0.4) * ops["x"]
    assert np.allclose(h, expected, atol=1e-14)


def test_counting_field_shifts_the_drive_phase(rabi_system):
    chi = 0.25
    shifted = rabi_system.with_modes([rabi_system.modes[0].with_phase(0.4 + chi)])
    h_chi = rabi_system.hamiltonian(1.1, np.array([[chi]]))[0]
    assert np.allclose(h_chi, shifted.hamiltonian(1.1, np.zeros((1, 1)))[0], atol=1e-14)


def test_time_derivative_matches_finite_difference(two_mode_jc):
    fields = np.array([[0.1, -0.2]])
    t, eps = 0.8, 1e-6
    numeric = (two_mode_jc.hamiltonian(t + eps, fields) - two_mode_jc.hamiltonian(t - eps, fields)) / (2 * eps)
    assert np.allclose(two_mode_jc.hamiltonian_time_derivative(t, fields), numeric, atol=1e-8)


def test_ensemble_dimension_limit(rabi_system):
    assert ModelFactory.ensemble_system(rabi_system, 6).dimension == 64
    with pytest.raises(InvalidSystemError):
        ModelFactory.ensemble_system(rabi_system, 7)


# ---------------------------------------------------------------- counting points


def test_counting_grid_is_power_of_two():
    grid = CountingGrid(256)
    assert grid.max_window == 127
    assert grid.chi[1] == pytest.approx(2 * math.pi / 256)
    with pytest.raises(InvalidGridError):
        CountingGrid(100)


@pytest.mark.parametrize("window, ok", [(0, True), (127, True), (128, False), (200, False)])
def test_counting_grid_window_rule(window, ok):
    grid = CountingGrid(256)
    if ok:
        assert grid.check_window(window) == window
    else:
        with pytest.raises(WindowError):
            grid.check_window(window)


def test_counting_grid_negation_and_signed_chi():
    grid = CountingGrid(8)
    negated = grid.chi[grid.negated_indices]
    assert np.allclose(np.exp(1j * (grid.chi + negated)), 1.0)
    assert grid.signed_chi.max() == pytest.approx(math.pi)
    assert grid.signed_chi.min() == pytest.approx(-3 * math.pi / 4)


def test_counting_points_need_negated_indices():
    class Unfinished(CountingPoints):
        def __init__(self):
            self.chi = np.zeros(1)
            self.mode = 0

    with pytest.raises(TypeError):
        CountingPoints()
    with pytest.raises(TypeError):
        Unfinished()


@pytest.mark.parametrize("points", [8, 64, 256])
def test_counting_grid_discrete_orthogonality(points):
    grid = CountingGrid(points)
    orders = np.arange(-(points // 2) + 1, points // 2)
    phases = np.exp(1j * np.outer(orders, grid.chi))
    gram = phases @ phases.conj().T / points
    assert np.allclose(gram, np.eye(orders.size), atol=1e-12)


@pytest.mark.parametrize("step, half_width", [(0.0, 8), (0.6, 8), (0.01, 3), (0.01, 0)])
def test_counting_stencil_validation(step, half_width):
    with pytest.raises(InvalidGridError):
        CountingStencil(step, half_width=half_width)


def test_counting_stencil_layout():
    stencil = CountingStencil(0.01)
    assert stencil.size == 17
    assert stencil.chi[stencil.zero_index] == 0.0
    assert np.allclose(stencil.chi[stencil.negated_indices], -stencil.chi)
    assert stencil.delta == pytest.approx(0.02)


def test_adapted_stencil_shrinks_with_transfer():
    coarse = CountingStencil.adapted_to(0.0, 0.0)
    fine = CountingStencil.adapted_to(340.0, 100.0)
    assert coarse.delta == pytest.approx(0.05)
    assert fine.delta == pytest.approx(0.1 / 371.0)


def test_field_vectors_place_chi_on_counted_mode():
    fields = CountingStencil(0.1, half_width=2, mode=1).field_vectors(2)
    assert np.allclose(fields[:, 0], 0.0)
    assert np.allclose(fields[:, 1], [-0.2, -0.1, 0.0, 0.1, 0.2])
    with pytest.raises(InvalidGridError):
        CountingStencil(0.1, half_width=2, mode=2).field_vectors(2)


# ---------------------------------------------------------------- containers


def test_propagator_set_requires_times_from_zero():
    grid = CountingGrid(4)
    matrices = np.broadcast_to(np.eye(2), (4, 2, 2, 2))
    with pytest.raises(InvalidGridError):
        GeneralizedPropagatorSet(grid, [0.5, 1.0], matrices, [0.0])
    with pytest.raises(InvalidGridError):
        GeneralizedPropagatorSet(grid, [0.0, 0.0], matrices, [0.0])
    with pytest.raises(InvalidGridError):
        GeneralizedPropagatorSet(grid, [0.0, 1.0], matrices, [0.0], picture="rotating")


def test_generating_function_samples_shape_and_branch():
    stencil = CountingStencil(0.1)
    values = np.ones((1, stencil.size), dtype=complex)
    samples = GeneratingFunctionSamples(stencil, [0.0], values)
    assert samples.normalization_defect() == 0.0
    with pytest.raises(InvalidGridError):
        GeneratingFunctionSamples(stencil, [0.0, 1.0], values)

    vanishing = values.copy()
    vanishing[0, stencil.zero_index + 1] = 0.0
    with pytest.raises(BranchError):
        GeneratingFunctionSamples(stencil, [0.0], vanishing).unwrapped_log()


@pytest.mark.parametrize(
    "energies, expected",
    [([0.3, -0.2], [0.3, -0.2]), ([0.7], [-0.3]), ([-0.5], [0.5]), ([1.5], [0.5])],
)
def test_fold_quasienergy(energies, expected):
    assert np.allclose(fold_quasienergy(np.array(energies), 1.0), expected)


def test_fock_window():
    window = FockWindow.around_number(2, half_width=4)
    assert (window.lower, window.upper) == (0, 6)
    assert window.contains(6) and not window.contains(7)
    with pytest.raises(WindowError):
        FockWindow(5, 4)


# ---------------------------------------------------------------- units and protocol


def test_physical_units_conventions():
    units = PhysicalUnits(photon_frequency=1.0e6, convention="cycles")
    assert units.angular_photon_frequency == pytest.approx(2 * math.pi * 1.0e6)
    assert units.with_convention("literal").angular_photon_frequency == pytest.approx(1.0e6)
    with pytest.raises(InvalidSystemError):
        PhysicalUnits(power=-1.0)
    with pytest.raises(InvalidSystemError):
        PhysicalUnits(convention="hertz")
    with pytest.raises(InvalidSystemError):
        units.require("power")


def test_protocol_state_branches():
    state = ProtocolState((1.0, 1.0), (1.0, 0.0), separation=10.0, initial_width=3.0, broadening=4.0)
    assert np.allclose(state.branch_probabilities, [0.5, 0.0, 0.5, 0.0])
    assert state.peak_width == pytest.approx(5.0)
    assert state.heralding_branches().tolist() == [False, True, True, False]
    with pytest.raises(ProtocolConfigurationError):
        ProtocolState((0.0, 0.0), (1.0, 1.0), separation=1.0, initial_width=0.0)
