"""Truncated Fock Space Domain Entities"""
import math
from typing import Dict, List, Optional

import numpy as np
from scipy import sparse
from scipy.special import erfc

from prft.domain.entities.photonic_state import PhotonicInitialState
from prft.domain.exceptions import InvalidStateError, WindowError


class FockWindow:
    """
    Retained photon numbers [lower, upper] of one mode.

    Business Rules:
    - 0 <= lower <= upper
    """

    def __init__(self, lower: int, upper: int):
        self.lower, self.upper = self._validate_bounds(lower, upper)

    @staticmethod
    def _validate_bounds(lower, upper):
        lower, upper = int(lower), int(upper)
        if lower < 0:
            raise WindowError(f"Fock window lower edge must be >= 0, got {lower}")
        if upper < lower:
            raise WindowError(f"Fock window [{lower}, {upper}] is empty")
        return lower, upper

    @classmethod
    def around(cls, state: PhotonicInitialState, drift: float = 0.0, minimum_half_width: int = 40) -> "FockWindow":
        """Default window max(8 sigma, minimum) + |drift| around n_bar."""
        return cls(*state.window_bounds(drift=drift, minimum_half_width=minimum_half_width))

    @classmethod
    def around_number(cls, n: int, half_width: int = 4) -> "FockWindow":
        return cls(max(n - half_width, 0), n + half_width)

    @property
    def size(self) -> int:
        return self.upper - self.lower + 1

    @property
    def n_values(self) -> np.ndarray:
        return np.arange(self.lower, self.upper + 1)

    @property
    def center(self) -> int:
        return (self.lower + self.upper) // 2

    @property
    def half_width(self) -> int:
        return (self.upper - self.lower) // 2

    def contains(self, n: int) -> bool:
        return self.lower <= n <= self.upper

    def __repr__(self):
        return f"<FockWindow [{self.lower}, {self.upper}]>"


def distribution_cumulants(n_values, probabilities) -> np.ndarray:
    """First four cumulants of a photon-number distribution (last axis)."""
    n_values = np.asarray(n_values, dtype=float)
    probabilities = np.asarray(probabilities, dtype=float)
    total = probabilities.sum(axis=-1, keepdims=True)
    weights = probabilities / total
    mean = np.sum(weights * n_values, axis=-1, keepdims=True)
    centered = n_values - mean
    mu2 = np.sum(weights * centered ** 2, axis=-1)
    mu3 = np.sum(weights * centered ** 3, axis=-1)
    mu4 = np.sum(weights * centered ** 4, axis=-1)
    return np.stack([mean[..., 0], mu2, mu3, mu4 - 3.0 * mu2 ** 2], axis=-1)


class FockEnsemble:
    """
    Fock Ensemble Domain Entity

    Joint matter-photon amplitudes psi[s, n - lower] of a single mode
    (Rabi-type models, no conservation law).
    """

    NORM_TOLERANCE = 1e-10

    def __init__(self, amplitudes, window: FockWindow, time: float = 0.0):
        self.window = window
        self.amplitudes = self._validate_amplitudes(amplitudes, window)
        self.time = float(time)

    @staticmethod
    def _validate_amplitudes(amplitudes, window) -> np.ndarray:
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.ndim != 2 or amplitudes.shape[1] != window.size:
            raise InvalidStateError(
                f"Fock amplitudes must have shape (d, {window.size}), got {amplitudes.shape}"
            )
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > FockEnsemble.NORM_TOLERANCE:
            raise InvalidStateError(f"Fock ensemble norm is {norm!r}, expected 1")
        return amplitudes

    @property
    def matter_dimension(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def photon_distribution(self, mode: int = 0):
        if mode != 0:
            raise InvalidStateError("single-mode Fock ensemble has only mode 0")
        return self.window.n_values, np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    def reduced_density(self) -> np.ndarray:
        return self.amplitudes @ self.amplitudes.conj().T

    def __repr__(self):
        return f"<FockEnsemble d={self.matter_dimension} window={self.window} t={self.time}>"


class ExcitationBlockEnsemble:
    """
    Excitation Block Ensemble Domain Entity

    Two-mode Jaynes-Cummings amplitudes grouped by the conserved excitation
    number N = n1 + n2 + e (e = 1 for spin up). Block b holds N = n_min + b;
    inside a block the chain position p = 2 (n1 - window1.lower) + e orders
    the states so that the block Hamiltonian is tridiagonal, and
    n2 = N - n1 - e. Entries whose n2 is negative are held at zero.

    `time` and `frequency` restore the block phases exp(-i w N t) that are
    factored out of the stored amplitudes.
    """

    NORM_TOLERANCE = 1e-10

    def __init__(
        self,
        blocks,
        n_min: int,
        window1: FockWindow,
        time: float = 0.0,
        frequency: float = 0.0,
    ):
        self.blocks = np.asarray(blocks, dtype=complex)
        self.n_min = int(n_min)
        self.window1 = window1
        self.time = float(time)
        self.frequency = float(frequency)
        self._validate()

    def _validate(self):
        if self.blocks.ndim != 2 or self.blocks.shape[1] != 2 * self.window1.size:
            raise InvalidStateError(
                f"block amplitudes must have shape (B, {2 * self.window1.size}), got {self.blocks.shape}"
            )
        if abs(self.norm() - 1.0) > self.NORM_TOLERANCE:
            raise InvalidStateError(f"block ensemble norm is {self.norm()!r}, expected 1")

    @property
    def excitation_numbers(self) -> np.ndarray:
        return self.n_min + np.arange(self.blocks.shape[0])

    @property
    def chain_n1(self) -> np.ndarray:
        return self.window1.lower + np.arange(2 * self.window1.size) // 2

    @property
    def chain_spin(self) -> np.ndarray:
        return np.arange(2 * self.window1.size) % 2

    def chain_n2(self) -> np.ndarray:
        """n2 for every (block, chain position), shape (B, L)."""
        return self.excitation_numbers[:, None] - self.chain_n1[None, :] - self.chain_spin[None, :]

    def norm(self) -> float:
        return float(np.sum(np.abs(self.blocks) ** 2))

    def block_norms(self) -> np.ndarray:
        return np.sum(np.abs(self.blocks) ** 2, axis=1)

    def mean_excitation(self) -> float:
        return float(np.sum(self.block_norms() * self.excitation_numbers))

    def photon_distribution(self, mode: int):
        weights = np.abs(self.blocks) ** 2
        return marginal_from_chain(weights, self.chain_n1, self.chain_n2(), mode)

    def reduced_density(self) -> np.ndarray:
        return block_reduced_density(self.blocks[None], self.time, self.frequency)[0]

    def __repr__(self):
        return (
            f"<ExcitationBlockEnsemble N={self.n_min}..{self.n_min + self.blocks.shape[0] - 1} "
            f"window1={self.window1} t={self.time}>"
        )


def marginal_from_chain(weights, chain_n1, chain_n2, mode: int):
    """
    Photon-number marginal of mode 0 or 1 from chain weights.

    Args:
        weights: |psi|^2 of shape (..., B, L)
        chain_n1: n1 per chain position (L,)
        chain_n2: n2 per (block, chain position) (B, L)
        mode: 0 or 1

    Returns:
        (n_values, probabilities (..., n))
    """
    if mode == 0:
        labels = np.broadcast_to(chain_n1, chain_n2.shape)
    elif mode == 1:
        labels = chain_n2
    else:
        raise InvalidStateError(f"two-mode ensemble has no mode {mode}")
    valid = labels >= 0
    lowest = int(labels[valid].min())
    highest = int(labels[valid].max())
    n_values = np.arange(lowest, highest + 1)
    flat_labels = np.where(valid, labels - lowest, 0).reshape(-1)
    mapping = sparse.csr_matrix(
        (valid.reshape(-1).astype(float), (np.arange(flat_labels.size), flat_labels)),
        shape=(flat_labels.size, n_values.size),
    )
    weights = np.asarray(weights, dtype=float)
    lead_shape = weights.shape[:-2]
    rows = weights.reshape((-1, flat_labels.size))
    result = np.asarray(mapping.T @ rows.T).T
    return n_values, result.reshape(lead_shape + (n_values.size,))


def block_reduced_density(blocks, times, frequency: float) -> np.ndarray:
    """
    Reduced spin density matrices from block amplitudes.

    Args:
        blocks: Amplitudes (T, B, L) with blocks of consecutive N
        times: Times (T,) restoring the relative block phase exp(-i w t)
        frequency: Mode frequency w

    Returns:
        Array (T, 2, 2), index 0 = spin up
    """
    blocks = np.asarray(blocks)
    times = np.broadcast_to(np.asarray(times, dtype=float), blocks.shape[:1])
    up = blocks[:, :, 1::2]
    down = blocks[:, :, 0::2]
    rho = np.zeros((blocks.shape[0], 2, 2), dtype=complex)
    rho[:, 0, 0] = np.sum(np.abs(up) ** 2, axis=(1, 2))
    rho[:, 1, 1] = np.sum(np.abs(down) ** 2, axis=(1, 2))
    # |up, n1, n2> lives in block N, |down, n1, n2> in block N - 1
    coherence = np.sum(up[:, 1:, :] * down[:, :-1, :].conj(), axis=(1, 2))
    rho[:, 0, 1] = coherence * np.exp(-1j * frequency * times)
    rho[:, 1, 0] = rho[:, 0, 1].conj()
    return rho


class FockTrajectory:
    """
    Observables of an exact Fock-space evolution at the requested times.

    Per-time photon marginals of every mode, reduced matter density matrices
    and, for block-structured models, the block norms. `final` is the state
    at the last time.
    """

    def __init__(
        self,
        times,
        marginals: Dict[int, tuple],
        densities,
        final,
        block_norms=None,
        edge_weights: Optional[Dict[str, float]] = None,
    ):
        self.times = np.asarray(times, dtype=float)
        self.marginals = marginals
        self.densities = np.asarray(densities, dtype=complex)
        self.final = final
        self.block_norms = None if block_norms is None else np.asarray(block_norms, dtype=float)
        self.edge_weights = edge_weights or {}

    @property
    def modes(self) -> List[int]:
        return sorted(self.marginals)

    def photon_distribution(self, mode: int):
        if mode not in self.marginals:
            raise InvalidStateError(f"trajectory has no mode {mode}")
        return self.marginals[mode]

    def spin_expectations(self) -> np.ndarray:
        """<sigma_x>, <sigma_y>, <sigma_z> per time for two-level matter, shape (T, 3)."""
        rho = self.densities
        sx = 2.0 * rho[:, 0, 1].real
        sy = -2.0 * rho[:, 0, 1].imag
        sz = (rho[:, 0, 0] - rho[:, 1, 1]).real
        return np.stack([sx, sy, sz], axis=1)

    def purity(self) -> np.ndarray:
        return np.einsum("tij,tji->t", self.densities, self.densities).real

    def norms(self) -> np.ndarray:
        return np.trace(self.densities, axis1=1, axis2=2).real

    def __repr__(self):
        return f"<FockTrajectory times={self.times.size} modes={self.modes}>"


def gaussian_tail_mass(state: PhotonicInitialState, window: FockWindow) -> float:
    """Probability mass of the Gaussian photon distribution outside the window."""
    scale = state.sigma * math.sqrt(2.0)
    upper = 0.5 * float(erfc((window.upper + 0.5 - state.mean) / scale))
    lower = 0.0 if window.lower == 0 else 0.5 * float(erfc((state.mean - window.lower + 0.5) / scale))
    return upper + lower
