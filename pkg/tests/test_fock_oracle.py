import math

import numpy as np
import pytest

from prft.domain.entities import CountingGrid, CountingStencil, FockWindow, MatterState, PhotonicInitialState
from prft.domain.exceptions import FockLeakageError, WindowError
from prft.domain.services import (
    CountingStatistics,
    DecoherenceCalculator,
    FloquetAnalyzer,
    JaynesCummingsParameters,
    ModelFactory,
    NumericPropagator,
    TwoModeJCPropagator,
    build_initial_fock_state,
    evolve_rabi_fock,
    evolve_two_mode_jc_fock,
    photon_distribution,
    photon_marginal,
    photon_resolved_operators,
    purity,
    reduced_matter_density,
    spin_expectations,
)


def mean_photons(trajectory, mode):
    n_values, probabilities = trajectory.photon_distribution(mode)
    return probabilities @ n_values


def test_initial_state_rejects_clipping_windows():
    with pytest.raises(WindowError):
        build_initial_fock_state(MatterState.spin_up(), [PhotonicInitialState(400.0)], [FockWindow(390, 410)])
    with pytest.raises(WindowError):
        build_initial_fock_state(MatterState.spin_up(), [20], [FockWindow(0, 10)])


def test_single_mode_initial_state_is_a_product():
    matter = MatterState.normalized([1.0, 1.0j])
    ensemble = build_initial_fock_state(matter, [PhotonicInitialState(100.0, phase=0.2)])
    assert ensemble.norm() == pytest.approx(1.0)
    assert purity(reduced_matter_density(ensemble)) == pytest.approx(1.0)
    marginal = photon_marginal(ensemble)
    assert marginal["probabilities"] @ marginal["n_values"] == pytest.approx(100.0, rel=1e-3)


def test_two_mode_jc_conserves_excitations():
    initial = build_initial_fock_state(MatterState.spin_up(), [3, 5], [FockWindow(0, 12), FockWindow(0, 12)])
    assert initial.excitation_numbers.tolist() == [9]

    times = np.linspace(0.0, 30.0, 16)
    trajectory = evolve_two_mode_jc_fock(1.0, 1.0, [0.1, 0.1], initial, times)

    excitations = mean_photons(trajectory, 0) + mean_photons(trajectory, 1) + trajectory.densities[:, 0, 0].real
    assert excitations == pytest.approx(np.full(times.size, 9.0), abs=1e-10)
    assert trajectory.norms() == pytest.approx(np.ones(times.size), abs=1e-10)
    assert trajectory.block_norms == pytest.approx(np.ones((times.size, 1)), abs=1e-10)
    # photons actually move between the modes
    assert np.ptp(mean_photons(trajectory, 0)) > 0.1


def test_threads_do_not_change_the_two_mode_oracle():
    states = [PhotonicInitialState(30.0), PhotonicInitialState(30.0, phase=math.pi / 2)]
    windows = [FockWindow(0, 80), FockWindow(0, 80)]
    initial = build_initial_fock_state(MatterState.spin_up(), states, windows)
    times = [0.0, 2.0, 5.0]
    serial = evolve_two_mode_jc_fock(1.0, 1.0, [0.02, 0.02], initial, times)
    parallel = evolve_two_mode_jc_fock(1.0, 1.0, [0.02, 0.02], initial, times, threads=3)
    assert np.allclose(serial.densities, parallel.densities, atol=1e-12)
    assert np.allclose(serial.photon_distribution(1)[1], parallel.photon_distribution(1)[1], atol=1e-12)


def test_rabi_oracle_reports_leakage():
    initial = build_initial_fock_state(MatterState.spin_up(), [4], [FockWindow.around_number(4)])
    with pytest.raises(FockLeakageError) as error:
        evolve_rabi_fock(1.0, 0.1, 1.0, initial, np.linspace(0.0, 5.0, 6), semiclassical_elements=True)
    assert error.value.edge == "upper"


def test_rabi_oracle_follows_the_semiclassical_drive():
    times = np.linspace(0.0, 10.0, 11)
    photonic = PhotonicInitialState(1000.0)
    initial = build_initial_fock_state(MatterState.spin_up(), [photonic])
    trajectory = evolve_rabi_fock(1.0, 1.0, 0.2, initial, times, semiclassical_elements=True)

    system = ModelFactory.rabi_system(1.0, 1.0, 0.2)
    propset = NumericPropagator(system).propagate(CountingStencil(0.1, half_width=2), times)
    expected = spin_expectations(propset, MatterState.spin_up())

    assert trajectory.norms() == pytest.approx(np.ones(times.size), abs=1e-10)
    assert np.allclose(trajectory.spin_expectations(), expected, atol=0.02)


def fig3_floquet_states(system):
    propagator = NumericPropagator(system)
    period = system.require_period()
    solution = FloquetAnalyzer.decompose(
        propagator.propagate(CountingStencil(0.01, half_width=2), [0.0, period]), period
    )
    return solution.at_zero()[1]


@pytest.mark.slow
@pytest.mark.parametrize("index", [0, 1])
def test_two_mode_oracle_matches_floquet_flux(two_mode_jc, index):
    photonic = [PhotonicInitialState(400.0, phase=phase) for phase in two_mode_jc.phases]
    windows = [FockWindow.around(state, drift=80) for state in photonic]
    state = MatterState.normalized(fig3_floquet_states(two_mode_jc)[:, index])
    initial = build_initial_fock_state(state, photonic, windows)

    times = np.linspace(0.0, 100.0, 5)
    trajectory = evolve_two_mode_jc_fock(
        1.0, 1.0, two_mode_jc.couplings, initial, times, semiclassical_elements=True
    )
    derivatives = [FloquetAnalyzer.phase_derivatives(two_mode_jc, mode) for mode in range(2)]
    for mode in range(2):
        change = mean_photons(trajectory, mode) - mean_photons(trajectory, mode)[0]
        expected = -derivatives[mode].first[index] * times
        assert np.all(np.abs(change - expected) <= np.maximum(0.02 * np.abs(expected), 0.5))


@pytest.mark.slow
def test_two_mode_oracle_purity_matches_branch_separation(two_mode_jc, jc_propagator):
    photonic = [PhotonicInitialState(400.0, phase=phase) for phase in two_mode_jc.phases]
    windows = [FockWindow.around(state, drift=80) for state in photonic]
    floquet = fig3_floquet_states(two_mode_jc)
    coefficients = np.array([1.0, 1.0]) / math.sqrt(2.0)
    state = MatterState.normalized(floquet @ coefficients)
    initial = build_initial_fock_state(state, photonic, windows)

    times = np.linspace(0.0, 100.0, 11)
    trajectory = evolve_two_mode_jc_fock(
        1.0, 1.0, two_mode_jc.couplings, initial, times, semiclassical_elements=True
    )
    slopes = np.array([FloquetAnalyzer.phase_derivatives(two_mode_jc, mode).first for mode in range(2)])
    predicted = DecoherenceCalculator.purity_prediction(
        coefficients[0], coefficients[1], slopes[:, 0], slopes[:, 1], [400.0, 400.0], times
    )
    assert trajectory.purity()[0] == pytest.approx(1.0, abs=1e-9)
    assert np.max(np.abs(trajectory.purity() - predicted)) < 0.05

    # cross-check against the generating function of the same state
    stencil = CountingStencil.adapted_to(0.0, (0.3 * times[-1]) ** 2)
    propset = jc_propagator.propagate(stencil, times)
    kappa2 = CountingStatistics.cumulants(CountingStatistics.dynamical_mgf(propset, state), (2,))[:, 0]
    spread = 0.25 * (slopes[0, 1] - slopes[0, 0]) ** 2 * times ** 2
    assert np.allclose(kappa2, spread, rtol=0.05, atol=1.0)


def test_jc_fock_state_occupations_are_exact():
    # |up>|24> with bare coupling 0.02 has effective coupling 0.02 * sqrt(25) = 0.1
    n, bare = 24, 0.02
    times = np.linspace(0.0, 50.0, 11)
    params = JaynesCummingsParameters(1.0, 1.0, [bare * math.sqrt(n + 1)], [0.0])
    propset = TwoModeJCPropagator(params).propagate(CountingGrid(16), times)

    n_values = np.arange(n - 2, n + 4)
    amplitudes = (n_values == n).astype(complex)
    targets = np.arange(n - 1, n + 3)
    prft = np.array([
        photon_distribution(photon_resolved_operators(propset, t), MatterState.spin_up(), n_values, amplitudes, targets)
        for t in times
    ])
    assert prft[:, 1] + prft[:, 2] == pytest.approx(np.ones(times.size), abs=1e-12)
    assert prft[:, [0, 3]] == pytest.approx(np.zeros((times.size, 2)), abs=1e-12)

    initial = build_initial_fock_state(MatterState.spin_up(), [n, 0], [FockWindow(n - 4, n + 6), FockWindow(0, 3)])
    trajectory = evolve_two_mode_jc_fock(1.0, 1.0, [bare, 0.0], initial, times)
    exact_n, exact_p = trajectory.photon_distribution(0)
    exact_n = np.asarray(exact_n).tolist()
    exact = exact_p[:, [exact_n.index(n), exact_n.index(n + 1)]]
    assert np.allclose(prft[:, 1:3], exact, atol=1e-8)


def test_semiclassical_elements_converge_with_photon_number():
    # effective coupling g = g~ sqrt(n_bar) held at 0.1 while n_bar grows
    coupling = 0.1
    times = np.linspace(0.0, 100.0, 21)
    params = JaynesCummingsParameters(1.0, 1.0, [coupling], [0.0])
    propset = TwoModeJCPropagator(params).propagate(CountingGrid(16), times)
    semiclassical = spin_expectations(propset, MatterState.spin_up())[:, 2]

    deviations = []
    for mean in (250.0, 1000.0, 4000.0):
        state = PhotonicInitialState(mean, 25.0, family="gaussian-squeezed")
        windows = [FockWindow.around(state), FockWindow.around_number(0)]
        initial = build_initial_fock_state(MatterState.spin_up(), [state, 0], windows)
        trajectory = evolve_two_mode_jc_fock(1.0, 1.0, [coupling / math.sqrt(mean), 0.0], initial, times)
        deviations.append(np.max(np.abs(trajectory.spin_expectations()[:, 2] - semiclassical)))

    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] < 0.02
