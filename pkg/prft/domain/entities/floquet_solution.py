"""Floquet Solution Domain Entities"""
import math

import numpy as np

from prft.domain.entities.counting_grid import CountingPoints


class FloquetSolution:
    """
    Floquet Solution Domain Entity

    Counting-field dependent quasienergies and Floquet states of one period.

    `quasienergies` (P, d) are continued in chi from the labels at chi = 0,
    where states are ordered by increasing folded quasienergy. Away from 0
    they are unwrapped, so they may leave the branch window; `folded` maps
    them back into (-w/2, w/2]. `states[p][:, mu]` is |u_mu> at point p.
    `windings[mu]` counts the multiples of w picked up over the sample set.
    """

    def __init__(self, period: float, points: CountingPoints, quasienergies, states, windings=None):
        self.period = float(period)
        self.points = points
        self.quasienergies = np.asarray(quasienergies, dtype=float)
        self.states = np.asarray(states, dtype=complex)
        n_states = self.quasienergies.shape[1]
        self.windings = np.zeros(n_states, dtype=int) if windings is None else np.asarray(windings, dtype=int)

    @property
    def base_frequency(self) -> float:
        return 2.0 * math.pi / self.period

    @property
    def n_states(self) -> int:
        return self.quasienergies.shape[1]

    @property
    def folded(self) -> np.ndarray:
        return fold_quasienergy(self.quasienergies, self.base_frequency)

    def at_zero(self):
        """(quasienergies (d,), states (d, d)) at chi = 0."""
        index = self.points.zero_index
        return self.quasienergies[index], self.states[index]

    def orthonormality_defect(self) -> float:
        _, states = self.at_zero()
        gram = states.conj().T @ states
        return float(np.max(np.abs(gram - np.eye(self.n_states))))

    def __repr__(self):
        energies, _ = self.at_zero()
        return f"<FloquetSolution period={self.period} E0={np.round(energies, 6).tolist()}>"


def fold_quasienergy(energies, base_frequency: float):
    """Map quasienergies into the branch window (-w/2, w/2]."""
    energies = np.asarray(energies, dtype=float)
    folded = energies - base_frequency * np.ceil(energies / base_frequency - 0.5)
    return folded


class QuasienergyDerivatives:
    """
    dE_mu/dphi_k and d^2E_mu/dphi_k^2 at the drive phases, per Floquet label.

    `first_error` / `second_error` are the Richardson error estimates
    |D(delta/2) - D(delta)| / 3.
    """

    def __init__(self, mode: int, phase: float, quasienergies, first, second, first_error, second_error):
        self.mode = int(mode)
        self.phase = float(phase)
        self.quasienergies = np.asarray(quasienergies, dtype=float)
        self.first = np.asarray(first, dtype=float)
        self.second = np.asarray(second, dtype=float)
        self.first_error = np.asarray(first_error, dtype=float)
        self.second_error = np.asarray(second_error, dtype=float)

    def order(self, n: int) -> np.ndarray:
        return self.first if n == 1 else self.second

    def within_target(self, relative: float = 1e-6, absolute: float = 1e-10) -> bool:
        scale = np.maximum(np.abs(self.quasienergies) * relative, absolute)
        return bool(np.all(self.first_error <= scale) and np.all(self.second_error <= scale))

    def __repr__(self):
        return f"<QuasienergyDerivatives mode={self.mode} first={self.first.tolist()}>"
