"""Floquet Analyzer - Quasienergies, branch continuation and phase derivatives"""
import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from prft.domain.entities import (
    CountingGrid,
    CountingPoints,
    CountingStencil,
    DrivenSystem,
    FloquetSolution,
    GeneralizedPropagatorSet,
    MatterState,
    QuasienergyDerivatives,
    fold_quasienergy,
)
from prft.domain.exceptions import BranchError, DegeneracyError
from prft.domain.services.propagator import NumericPropagator

logger = logging.getLogger(__name__)

DEGENERACY_TOLERANCE = 1e-10
NORMALITY_TOLERANCE = 1e-10
AMBIGUOUS_OVERLAP = 0.5


def one_period_eigensystem(matrix: np.ndarray):
    """
    Eigenvalues and eigenvectors of U(tau) through a complex Schur form.

    U(tau) is unitary only at chi = 0; when the triangular factor is not
    diagonal the general eigensolver is used instead.
    """
    triangular, unitary = linalg.schur(matrix, output="complex")
    off_diagonal = np.triu(triangular, k=1)
    if np.max(np.abs(off_diagonal), initial=0.0) <= NORMALITY_TOLERANCE:
        return np.diag(triangular).copy(), unitary
    values, vectors = linalg.eig(matrix)
    return values, vectors / np.linalg.norm(vectors, axis=0)


def _circular_gap(a: float, b: float, base_frequency: float) -> float:
    gap = abs(a - b) % base_frequency
    return min(gap, base_frequency - gap)


def _check_degeneracy(energies: np.ndarray, base_frequency: float, where: str):
    for i in range(energies.size):
        for j in range(i + 1, energies.size):
            if _circular_gap(energies[i], energies[j], base_frequency) < DEGENERACY_TOLERANCE:
                raise DegeneracyError(
                    f"quasienergies {i} and {j} collide at {where}", pair=(i, j)
                )


def _match(previous_states: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Permutation p with states[:, p[mu]] continuing previous_states[:, mu]."""
    overlap = np.abs(previous_states.conj().T @ states)
    greedy = np.argmax(overlap, axis=1)
    best = overlap[np.arange(overlap.shape[0]), greedy]
    if np.unique(greedy).size == greedy.size and np.all(best > AMBIGUOUS_OVERLAP):
        return greedy
    rows, cols = linear_sum_assignment(-overlap)
    permutation = np.empty_like(cols)
    permutation[rows] = cols
    return permutation


class FloquetAnalyzer:
    """
    Floquet decomposition of U_chi(tau) with labels continued in chi.

    Labels are fixed at chi = 0 by increasing folded quasienergy and carried
    outward in both directions by maximal state overlap. Quasienergies along
    each path are unwrapped; adjacent jumps must stay below w/4.
    """

    @staticmethod
    def decompose(propset: GeneralizedPropagatorSet, period: Optional[float] = None) -> FloquetSolution:
        """
        Raises:
            CoverageError: If the propagators are not stored at t = period
            DegeneracyError: Colliding quasienergies at chi = 0 or along a path
            BranchError: Discontinuous continuation
        """
        period = float(period if period is not None else propset.times[-1])
        base_frequency = 2.0 * math.pi / period
        matrices = propset.at(period)
        points = propset.points
        n_points, d = matrices.shape[0], matrices.shape[-1]

        raw_energies = np.empty((n_points, d))
        raw_states = np.empty((n_points, d, d), dtype=complex)
        for index in range(n_points):
            values, vectors = one_period_eigensystem(matrices[index])
            raw_energies[index] = -np.angle(values) / period
            raw_states[index] = vectors

        energies = np.empty_like(raw_energies)
        states = np.empty_like(raw_states)
        zero = points.zero_index
        folded_zero = fold_quasienergy(raw_energies[zero], base_frequency)
        order = np.argsort(folded_zero)
        energies[zero] = folded_zero[order]
        states[zero] = raw_states[zero][:, order]
        _check_degeneracy(energies[zero], base_frequency, "chi = 0")

        for path in FloquetAnalyzer._paths(points):
            previous = zero
            for index in path[1:]:
                energies[index], states[index] = FloquetAnalyzer._continue(
                    energies[previous], states[previous], raw_energies[index], raw_states[index],
                    base_frequency, points.chi[index],
                )
                previous = index

        windings = FloquetAnalyzer._windings(points, energies, states, raw_energies, raw_states, base_frequency)
        return FloquetSolution(period, points, energies, states, windings)

    @staticmethod
    def _paths(points: CountingPoints):
        signed = points.signed_chi
        positive = np.flatnonzero(signed >= 0)
        positive = positive[np.argsort(signed[positive])]
        negative = np.flatnonzero(signed <= 0)
        negative = negative[np.argsort(-signed[negative])]
        return positive, negative

    @staticmethod
    def _continue(previous_energies, previous_states, raw_energies, raw_states, base_frequency, chi):
        _check_degeneracy(raw_energies, base_frequency, f"chi = {chi:.6g}")
        permutation = _match(previous_states, raw_states)
        energies = raw_energies[permutation]
        states = raw_states[:, permutation]
        energies = energies + base_frequency * np.round((previous_energies - energies) / base_frequency)
        jumps = np.abs(energies - previous_energies)
        if np.any(jumps >= base_frequency / 4.0):
            raise BranchError(
                f"quasienergy branch jumps by {jumps.max():.3e} (>= w/4) at chi = {chi:.6g}"
            )
        # fix the gauge so that consecutive states overlap with a real positive number
        phases = np.sum(previous_states.conj() * states, axis=0)
        phases = np.where(np.abs(phases) > 0, phases / np.abs(phases), 1.0)
        return energies, states * phases.conj()[None, :]

    @staticmethod
    def _windings(points, energies, states, raw_energies, raw_states, base_frequency) -> np.ndarray:
        if not isinstance(points, CountingGrid):
            return np.zeros(energies.shape[1], dtype=int)
        positive, negative = FloquetAnalyzer._paths(points)
        closing_from, closing_to = positive[-1], negative[-1]
        if closing_from == closing_to:
            return np.zeros(energies.shape[1], dtype=int)
        continued, continued_states = FloquetAnalyzer._continue(
            energies[closing_from], states[closing_from], raw_energies[closing_to], raw_states[closing_to],
            base_frequency, points.chi[closing_to],
        )
        labels = _match(states[closing_to], continued_states)
        return np.rint((continued[labels] - energies[closing_to]) / base_frequency).astype(int)

    @staticmethod
    def phase_derivatives(
        system: DrivenSystem,
        mode: int,
        delta: float = 1e-3,
        propagator=None,
        relative_target: float = 1e-6,
        absolute_target: float = 1e-10,
    ) -> QuasienergyDerivatives:
        """
        dE_mu/dphi_k and d^2E_mu/dphi_k^2 at the system's drive phases.

        Five-point stencil chi in {0, +-delta/2, +-delta} on mode k, central
        differences at both steps and one Richardson halving,
        D = (4 D(delta/2) - D(delta)) / 3. Labels follow the continuation.

        Args:
            system: Driven system with a Floquet period
            mode: Mode index k
            delta: Outer finite-difference step
            propagator: Object with propagate(points, times); defaults to the
                numeric integrator
        """
        period = system.require_period()
        stencil = CountingStencil(step=delta / 2.0, half_width=2, mode=mode)
        propagator = propagator or NumericPropagator(system)
        propset = propagator.propagate(stencil, [0.0, period])
        solution = FloquetAnalyzer.decompose(propset, period)

        e = solution.quasienergies
        zero = stencil.zero_index
        e0, e_half_plus, e_half_minus = e[zero], e[zero + 1], e[zero - 1]
        e_full_plus, e_full_minus = e[zero + 2], e[zero - 2]
        h = delta / 2.0

        first_half = (e_half_plus - e_half_minus) / (2.0 * h)
        first_full = (e_full_plus - e_full_minus) / (2.0 * delta)
        second_half = (e_half_plus - 2.0 * e0 + e_half_minus) / h ** 2
        second_full = (e_full_plus - 2.0 * e0 + e_full_minus) / delta ** 2

        derivatives = QuasienergyDerivatives(
            mode=mode,
            phase=float(system.phases[mode]),
            quasienergies=e0,
            first=(4.0 * first_half - first_full) / 3.0,
            second=(4.0 * second_half - second_full) / 3.0,
            first_error=np.abs(first_half - first_full) / 3.0,
            second_error=np.abs(second_half - second_full) / 3.0,
        )
        if not derivatives.within_target(relative_target, absolute_target):
            logger.warning(
                "quasienergy derivative error estimate above target on mode %d: first %s, second %s",
                mode, derivatives.first_error.tolist(), derivatives.second_error.tolist(),
            )
        return derivatives

    @staticmethod
    def expand(state: MatterState, solution: FloquetSolution) -> np.ndarray:
        """Coefficients c_mu of the state in the chi = 0 Floquet basis."""
        _, states = solution.at_zero()
        return np.linalg.solve(states, state.amplitudes)


floquet_decompose = FloquetAnalyzer.decompose
quasienergy_phase_derivatives = FloquetAnalyzer.phase_derivatives
expand_in_floquet_basis = FloquetAnalyzer.expand
