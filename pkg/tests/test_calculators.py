import math

import numpy as np
import pytest

from prft.domain.entities import HBAR, CountingStencil, PhysicalUnits, ProtocolState
from prft.domain.exceptions import InvalidStateError, InvalidSystemError, ProtocolConfigurationError
from prft.domain.services import CommunicationCalculator, DecoherenceCalculator, ModelFactory, NumericPropagator
from prft.domain.services.model_factory import collective_operator


@pytest.fixture
def link_units():
    return PhysicalUnits(
        photon_frequency=400e12,
        rabi_frequency=40e6,
        power=10e-6,
        loss_rate=0.051,
        distance=500.0,
        pulse_duration=1e-3,
        n_atoms=12,
    )


@pytest.fixture
def desk_units():
    return PhysicalUnits(
        photon_frequency=400e12,
        rabi_frequency=40e6,
        power=10e-6,
        loss_rate=0.0,
        distance=0.001,
        pulse_duration=1e-6,
    )


# ---------------------------------------------------------------- purity


def test_purity_prediction_limits():
    times = np.array([0.0, 10.0, 1e4])
    purity = DecoherenceCalculator.purity_prediction(1 / math.sqrt(2), 1 / math.sqrt(2), -0.3, 0.3, 400.0, times)
    assert purity[0] == pytest.approx(1.0)
    assert purity[1] == pytest.approx(0.5 + 0.5 * math.exp(-0.36 * 100 / 1600))
    assert purity[2] == pytest.approx(0.5)
    assert DecoherenceCalculator.purity_prediction(1.0, 0.0, -0.3, 0.3, 400.0, 50.0) == pytest.approx(1.0)


@pytest.mark.parametrize("variant, denominator", [(None, 4.0), ("overlap", 4.0), ("printed", 2.0)])
def test_purity_variant_sets_the_gaussian_denominator(variant, denominator):
    c = 1 / math.sqrt(2)
    kwargs = {} if variant is None else {"variant": variant}
    purity = DecoherenceCalculator.purity_prediction(c, c, -0.3, 0.3, 100.0, 20.0, **kwargs)
    assert purity == pytest.approx(0.5 + 0.5 * math.exp(-(0.6 * 20.0) ** 2 / (denominator * 100.0)))


def test_two_mode_purity_equals_the_printed_single_mode_form():
    slopes = np.array([[-0.28, 0.28], [0.28, -0.28]])
    c = 1 / math.sqrt(2)
    summed = DecoherenceCalculator.purity_prediction(c, c, slopes[:, 0], slopes[:, 1], [400.0, 400.0], 30.0)
    printed = DecoherenceCalculator.purity_prediction(c, c, -0.28, 0.28, 400.0, 30.0, variant="printed")
    assert summed == pytest.approx(printed)


@pytest.mark.parametrize(
    "args, kwargs",
    [
        ((1.0, 1.0, 0.0, 1.0, 400.0, 1.0), {}),
        ((1.0, 0.0, 0.0, 1.0, 0.0, 1.0), {}),
        ((1.0, 0.0, 0.0, 1.0, 400.0, 1.0), {"variant": "unknown"}),
        ((1.0, 0.0, [0.0, 0.1], [1.0, 0.9], [400.0, 400.0, 400.0], 1.0), {}),
    ],
)
def test_purity_prediction_rejects_bad_input(args, kwargs):
    with pytest.raises(InvalidStateError):
        DecoherenceCalculator.purity_prediction(*args, **kwargs)


# ---------------------------------------------------------------- coherence times


def test_traveling_wave_coherence_under_both_conventions(link_units):
    report = DecoherenceCalculator.coherence_report(link_units)
    assert set(report) == {"cycles", "literal"}
    assert report["cycles"]["traveling"]["coherence_time"] == pytest.approx(0.0236, rel=2e-3)
    assert report["literal"]["traveling"]["coherence_time"] == pytest.approx(0.148, rel=3e-3)
    assert report["cycles"]["traveling"]["pair"] == (0, 1)
    assert "closed" not in report["cycles"]


def test_closed_cavity_coherence_time():
    frequency = 5e9
    n_bar = DecoherenceCalculator.mean_photons(2.0, 1e-6, frequency)
    assert n_bar == pytest.approx(8.8541878128e-12 * 4.0 * 1e-6 / (2 * HBAR * 2 * math.pi * frequency))

    result = DecoherenceCalculator.coherence_time_closed([[0.1, 0.5, -0.2]], 2.0, 1e-6, [frequency])
    assert result["pair"] == (1, 2)
    assert result["coherence_time"] == pytest.approx(math.sqrt(n_bar) / 0.7)


def test_phase_insensitive_splitting_never_decoheres():
    result = DecoherenceCalculator.coherence_time_traveling([[0.2, 0.2]], [1e-3], [1e9])
    assert result["coherence_time"] == math.inf
    assert result["mode"] is None


def test_coherence_report_needs_a_drive_description():
    with pytest.raises(InvalidSystemError):
        DecoherenceCalculator.coherence_report(PhysicalUnits(photon_frequency=1e9, rabi_frequency=1e6))


# ---------------------------------------------------------------- communication


def test_transfer_rate_over_fiber(link_units):
    assert CommunicationCalculator.transfer_rate(link_units) == pytest.approx(119.7, rel=1e-3)
    lossless = PhysicalUnits(photon_frequency=1e9, rabi_frequency=1e6, power=1e-6, loss_rate=0.0, distance=1.0)
    assert CommunicationCalculator.transfer_rate(lossless) == math.inf


def test_separation_equals_broadening_at_the_transfer_rate(link_units):
    rate = CommunicationCalculator.transfer_rate(link_units)
    units = PhysicalUnits(
        photon_frequency=400e12, rabi_frequency=40e6, power=10e-6, loss_rate=0.051,
        distance=500.0, pulse_duration=1.0 / rate, n_atoms=12,
    )
    assert CommunicationCalculator.peak_separation(units) == pytest.approx(
        CommunicationCalculator.peak_broadening(units), rel=1e-9
    )


def test_ghz_enhancement_scales_with_atoms():
    energies = np.array([-0.1, 0.1])
    assert CommunicationCalculator.ghz_enhanced_splitting(6, energies) == pytest.approx([-0.6, 0.6])
    assert CommunicationCalculator.ghz_enhanced_splitting(3, energies, labels=[0, 1, 1]) == pytest.approx(0.1)
    with pytest.raises(InvalidStateError):
        CommunicationCalculator.ghz_enhanced_splitting(3, energies, labels=[0, 1])


def test_ghz_state_is_an_equal_superposition():
    state = ModelFactory.ghz_state(3, relative_phase=0.5)
    amplitudes = state.amplitudes
    assert amplitudes.size == 8
    assert abs(amplitudes[0]) == pytest.approx(1 / math.sqrt(2))
    assert abs(amplitudes[-1]) == pytest.approx(1 / math.sqrt(2))
    assert np.sum(np.abs(amplitudes[1:-1])) == pytest.approx(0.0)


def test_desk_protocol_heralds_half_the_trials(desk_units):
    result = CommunicationCalculator.protocol_simulate(desk_units, 100_000, seed=7)
    assert result["peak_separation"] == pytest.approx(40.0)
    assert result["peak_broadening"] == 0.0
    assert result["window"] == pytest.approx(20.0)
    assert result["analytic_success"] == pytest.approx(0.5)
    assert result["success_rate"] == pytest.approx(0.5, abs=0.005)
    assert result["false_herald_fraction"] == 0.0
    assert result["information_lost"] is False
    assert result["record"]["trials"] == 100_000


def test_protocol_is_reproducible_across_threads(desk_units):
    serial = CommunicationCalculator.protocol_simulate(desk_units, 50_000, seed=11, initial_width=15.0)
    parallel = CommunicationCalculator.protocol_simulate(
        desk_units, 50_000, seed=11, initial_width=15.0, threads=4
    )
    assert serial["success_rate"] == parallel["success_rate"]
    assert serial["record"] == parallel["record"]
    assert 0.0 < serial["false_herald_fraction"] < 1.0


def test_overlapping_peaks_lose_which_path_information(desk_units):
    result = CommunicationCalculator.protocol_simulate(desk_units, 1000, seed=1, initial_width=100.0)
    assert result["information_lost"] is True


@pytest.mark.parametrize("trials, window", [(0, None), (10, 0.0), (10, -1.0)])
def test_protocol_rejects_inconsistent_settings(desk_units, trials, window):
    with pytest.raises(ProtocolConfigurationError):
        CommunicationCalculator.protocol_simulate(desk_units, trials, seed=1, window=window)


def test_closed_form_success_matches_gaussian_tails():
    state = ProtocolState((1.0, 1.0), (1.0, 1.0), separation=40.0, initial_width=10.0, broadening=0.0)
    result = CommunicationCalculator.protocol_success_probability(state, 20.0)
    # two centered peaks inside +-2 sigma and two displaced peaks reaching in from 2 sigma away
    centered = math.erf(2.0 / math.sqrt(2.0))
    displaced = 0.5 * (math.erfc(2.0 / math.sqrt(2.0)) - math.erfc(6.0 / math.sqrt(2.0)))
    assert result["success"] == pytest.approx(0.5 * centered + 0.5 * displaced)
    assert result["misclassification"] == pytest.approx(0.5 * math.erfc(2.0 / math.sqrt(2.0)))


def test_ensemble_propagator_is_a_product_of_single_atoms(rabi_system):
    ensemble = ModelFactory.ensemble_system(rabi_system, 2)
    period = rabi_system.require_period()
    stencil = CountingStencil(0.05, half_width=2)
    single = NumericPropagator(rabi_system).propagate(stencil, [0.0, period]).at(period)
    joint = NumericPropagator(ensemble).propagate(stencil, [0.0, period]).at(period)
    expected = np.einsum("pij,pkl->pikjl", single, single).reshape(-1, 4, 4)
    assert np.allclose(joint, expected, atol=1e-9)


def test_collective_floquet_state_and_rotation():
    rotation = ModelFactory.hadamard_rotation(1)
    assert rotation @ np.array([1.0, 0.0]) == pytest.approx(np.array([1.0, 1.0]) / math.sqrt(2))

    basis = np.eye(2)
    state = ModelFactory.collective_floquet_state(basis, [0, 1, 1])
    assert state.basis == "floquet"
    assert state.amplitudes[0b011] == pytest.approx(1.0)

    total_z = collective_operator(np.diag([1.0, -1.0]), 3)
    assert np.diag(total_z).real.tolist() == [3, 1, 1, -1, 1, -1, -1, -3]
