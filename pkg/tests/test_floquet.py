import math

import numpy as np
import pytest

from prft.domain.entities import CountingGrid, CountingStencil, GeneralizedPropagatorSet, MatterState
from prft.domain.exceptions import DegeneracyError
from prft.domain.services import FloquetAnalyzer, ModelFactory, NumericPropagator
from prft.domain.services.jaynes_cummings import flux_closed_form


def test_rabi_floquet_states_are_orthonormal(rabi_system):
    period = rabi_system.require_period()
    propset = NumericPropagator(rabi_system).propagate(CountingGrid(16), [0.0, period])
    solution = FloquetAnalyzer.decompose(propset, period)
    energies, states = solution.at_zero()

    assert solution.orthonormality_defect() < 1e-10
    assert np.all(np.diff(energies) > 0)
    assert np.all(np.abs(energies) <= solution.base_frequency / 2)
    assert solution.windings.shape == (2,)
    # the one-period propagator is diagonal in its own Floquet basis
    phases = np.exp(-1j * energies * period)
    assert np.allclose(propset.at(period)[0] @ states, states * phases, atol=1e-10)


@pytest.mark.parametrize("winding", [-1, 0, 1, 2])
def test_windings_count_quasienergy_turns_over_a_closed_loop(winding):
    # one period advances by exp(-i winding chi): E_mu(chi) = E_mu(0) + winding chi / tau
    grid = CountingGrid(32)
    period = 2.0 * math.pi
    bases = np.array([-0.2, 0.25])
    one_period = np.exp(-1j * winding * grid.chi)[:, None, None] * np.diag(np.exp(-1j * bases * period))[None]
    identity = np.broadcast_to(np.eye(2, dtype=complex), one_period.shape)
    propset = GeneralizedPropagatorSet(grid, [0.0, period], np.stack([identity, one_period], axis=1), [0.0])

    solution = FloquetAnalyzer.decompose(propset, period)
    assert solution.quasienergies[grid.zero_index] == pytest.approx(bases)
    assert solution.windings.tolist() == [winding, winding]


def test_two_mode_jc_quasienergies(two_mode_jc, jc_propagator):
    period = two_mode_jc.require_period()
    propset = jc_propagator.propagate(CountingStencil(0.01, half_width=2), [0.0, period])
    energies, _ = FloquetAnalyzer.decompose(propset, period).at_zero()
    shift = 0.4 * math.sqrt(2.0) - 0.5
    assert energies == pytest.approx([-shift, shift], abs=1e-12)


@pytest.mark.parametrize("mode", [0, 1])
def test_closed_form_phase_derivatives_match_flux(two_mode_jc, jc_params, jc_propagator, mode):
    derivatives = FloquetAnalyzer.phase_derivatives(two_mode_jc, mode, propagator=jc_propagator)
    assert derivatives.first == pytest.approx(flux_closed_form(jc_params, mode), abs=1e-6)

    h = 1e-4
    fields = np.zeros((3, 2))
    fields[1, mode], fields[2, mode] = h, -h
    e0, plus, minus = jc_params.quasienergy(fields)
    curvature = (plus - 2.0 * e0 + minus) / h ** 2
    # index 0 follows the -E branch
    assert derivatives.second == pytest.approx([-curvature, curvature], abs=1e-5)
    assert derivatives.within_target(relative=1e-5, absolute=1e-8)


def test_numeric_phase_derivatives_match_flux(two_mode_jc, jc_params):
    derivatives = FloquetAnalyzer.phase_derivatives(two_mode_jc, 0)
    assert derivatives.first == pytest.approx(flux_closed_form(jc_params, 0), abs=1e-5)
    assert derivatives.phase == pytest.approx(0.0)


def test_traceless_system_derivatives_cancel(rabi_system):
    derivatives = FloquetAnalyzer.phase_derivatives(rabi_system, 0)
    assert np.sum(derivatives.first) == pytest.approx(0.0, abs=1e-8)
    assert np.sum(derivatives.second) == pytest.approx(0.0, abs=1e-6)


def test_degenerate_quasienergies_raise():
    # g = 0 at resonance: U(tau) = -1
    system = ModelFactory.rabi_system(1.0, 1.0, 0.0)
    period = system.require_period()
    propset = NumericPropagator(system).propagate(CountingStencil(0.01, half_width=2), [0.0, period])
    with pytest.raises(DegeneracyError):
        FloquetAnalyzer.decompose(propset, period)


def test_expand_recovers_floquet_labels(two_mode_jc, jc_propagator):
    period = two_mode_jc.require_period()
    solution = FloquetAnalyzer.decompose(
        jc_propagator.propagate(CountingStencil(0.01, half_width=2), [0.0, period]), period
    )
    _, states = solution.at_zero()

    coefficients = FloquetAnalyzer.expand(MatterState.normalized(states[:, 1]), solution)
    assert np.abs(coefficients) == pytest.approx([0.0, 1.0], abs=1e-12)

    mixed = FloquetAnalyzer.expand(MatterState.spin_up(), solution)
    assert np.sum(np.abs(mixed) ** 2) == pytest.approx(1.0)
