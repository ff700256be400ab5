"""Fock Oracle - Exact light-matter dynamics in truncated Fock space"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional, Sequence, Union

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import expm_multiply
from typing_extensions import TypeAlias

from prft.domain.entities import (
    ExcitationBlockEnsemble,
    FockEnsemble,
    FockTrajectory,
    FockWindow,
    MatterState,
    PhotonicInitialState,
    distribution_cumulants,
)
from prft.domain.entities.fock_ensemble import gaussian_tail_mass, marginal_from_chain
from prft.domain.exceptions import FockLeakageError, InvalidStateError, WindowError

logger = logging.getLogger(__name__)

PhotonicSpec: TypeAlias = Union[PhotonicInitialState, int]

CLIPPING_TOLERANCE = 1e-12
BLOCK_WEIGHT_CUTOFF = 1e-12
LEAKAGE_TOLERANCE = 1e-8
DENSE_DIMENSION_LIMIT = 2500
EDGE_DEPTH = 2
BLOCK_BATCH = 32


def _default_window(spec: PhotonicSpec) -> FockWindow:
    if isinstance(spec, PhotonicInitialState):
        return FockWindow.around(spec)
    return FockWindow.around_number(int(spec))


def _mode_amplitudes(spec: PhotonicSpec, window: FockWindow) -> np.ndarray:
    """Photonic amplitudes over the window; integers denote Fock states."""
    if isinstance(spec, PhotonicInitialState):
        tail = gaussian_tail_mass(spec, window)
        if tail > CLIPPING_TOLERANCE:
            raise WindowError(f"{window} clips {tail:.3e} of the photon distribution of {spec}")
        return spec.amplitudes(window.n_values)
    n = int(spec)
    if not window.contains(n):
        raise WindowError(f"Fock state |{n}> lies outside {window}")
    amplitudes = np.zeros(window.size, dtype=complex)
    amplitudes[n - window.lower] = 1.0
    return amplitudes


def build_initial_fock_state(
    matter: MatterState,
    photonic: Sequence[PhotonicSpec],
    windows: Optional[Sequence[FockWindow]] = None,
):
    """
    Product state b_s a_n (one mode) or b_s a_n1 a_n2 (two modes).

    Args:
        matter: Matter amplitudes b_s (index 0 = spin up)
        photonic: Per mode a PhotonicInitialState or an integer Fock number
        windows: Per mode retained photon numbers (default: 8 sigma or +-4)

    Returns:
        FockEnsemble for one mode, ExcitationBlockEnsemble for two modes

    Raises:
        WindowError: If a window clips more than 1e-12 of the distribution
    """
    photonic = list(photonic)
    windows = list(windows) if windows is not None else [_default_window(spec) for spec in photonic]
    if len(windows) != len(photonic):
        raise InvalidStateError("one window per photonic mode is required")
    amplitudes = [_mode_amplitudes(spec, window) for spec, window in zip(photonic, windows)]

    if len(photonic) == 1:
        return FockEnsemble(np.outer(matter.amplitudes, amplitudes[0]), windows[0])

    if len(photonic) == 2:
        if matter.dimension != 2:
            raise InvalidStateError("the two-mode Jaynes-Cummings model needs a two-level matter state")
        return _block_product_state(matter, amplitudes, windows)

    raise InvalidStateError("exact Fock dynamics is available for one or two modes")


def _block_product_state(matter: MatterState, amplitudes, windows) -> ExcitationBlockEnsemble:
    window1, window2 = windows
    n_min = window1.lower + window2.lower
    n_max = window1.upper + window2.upper + 1
    excitation = np.arange(n_min, n_max + 1)
    chain = np.arange(2 * window1.size)
    chain_n1 = window1.lower + chain // 2
    chain_spin = chain % 2
    n2 = excitation[:, None] - chain_n1[None, :] - chain_spin[None, :]

    inside = (n2 >= window2.lower) & (n2 <= window2.upper)
    a2 = np.where(inside, amplitudes[1][np.clip(n2 - window2.lower, 0, window2.size - 1)], 0.0)
    spin = np.where(chain_spin == 1, matter.amplitudes[0], matter.amplitudes[1])
    blocks = a2 * (spin * amplitudes[0][chain_n1 - window1.lower])[None, :]

    weights = np.sum(np.abs(blocks) ** 2, axis=1)
    kept = np.flatnonzero(weights >= BLOCK_WEIGHT_CUTOFF)
    first, last = int(kept[0]), int(kept[-1])
    blocks = blocks[first:last + 1]
    blocks = blocks / math.sqrt(float(np.sum(np.abs(blocks) ** 2)))
    logger.debug("kept excitation blocks %d..%d of %d..%d",
                 n_min + first, n_min + last, n_min, n_max)
    return ExcitationBlockEnsemble(blocks, n_min + first, window1)


def _edge_weight(weights: np.ndarray, lower_open: bool) -> Dict[str, float]:
    """Maximal weight over time in the outer EDGE_DEPTH indices (last axis)."""
    edges = {"upper": float(np.max(np.sum(weights[..., -EDGE_DEPTH:], axis=-1)))}
    if lower_open:
        edges["lower"] = float(np.max(np.sum(weights[..., :EDGE_DEPTH], axis=-1)))
    return edges


def _raise_on_leakage(edges: Dict[str, float]):
    for edge, weight in edges.items():
        if weight > LEAKAGE_TOLERANCE:
            raise FockLeakageError(
                f"Fock truncation leaks {weight:.3e} through the {edge} edge; enlarge the window",
                edge=edge,
            )


def evolve_rabi_fock(
    h_z: float,
    omega: float,
    coupling: float,
    initial: FockEnsemble,
    times: Sequence[float],
    semiclassical_elements: bool = False,
) -> FockTrajectory:
    """
    Quantum Rabi model H = h_z/2 sigma_z + omega a^+a + g~ sigma_x (a + a^+).

    The full (s, n) grid is kept since no excitation number is conserved.
    With semiclassical_elements every sqrt(n) becomes alpha and `coupling`
    is the effective g = g~ alpha; otherwise it is the bare g~.

    Raises:
        FockLeakageError: Weight above 1e-8 in the outer window indices
    """
    window = initial.window
    times = np.atleast_1d(np.asarray(times, dtype=float))
    hamiltonian = _rabi_hamiltonian(h_z, omega, coupling, window, semiclassical_elements)
    psi0 = initial.amplitudes.reshape(-1)
    dimension = psi0.size

    if dimension <= DENSE_DIMENSION_LIMIT:
        values, vectors = linalg.eigh(hamiltonian.toarray())
        coefficients = vectors.conj().T @ psi0
        states = (np.exp(-1j * np.outer(times - initial.time, values)) * coefficients) @ vectors.T
    else:
        states = np.empty((times.size, dimension), dtype=complex)
        current = psi0
        previous = initial.time
        for index, t in enumerate(times):
            if t != previous:
                current = expm_multiply(-1j * (t - previous) * hamiltonian, current)
            states[index] = current
            previous = t

    amplitudes = states.reshape(times.size, initial.matter_dimension, window.size)
    weights = np.abs(amplitudes) ** 2
    marginal = weights.sum(axis=1)
    edges = _edge_weight(marginal, lower_open=window.lower > 0)
    _raise_on_leakage(edges)

    densities = np.einsum("tsn,trn->tsr", amplitudes, amplitudes.conj())
    final = FockEnsemble(amplitudes[-1], window, time=times[-1])
    return FockTrajectory(times, {0: (window.n_values, marginal)}, densities, final, edge_weights=edges)


def _rabi_hamiltonian(h_z, omega, coupling, window: FockWindow, semiclassical_elements: bool):
    n_values = window.n_values
    if semiclassical_elements:
        ladder = sparse.diags(np.ones(window.size - 1), 1)
    else:
        ladder = sparse.diags(np.sqrt(n_values[1:].astype(float)), 1)
    field = ladder + ladder.T
    pauli_z = sparse.diags([1.0, -1.0])
    pauli_x = sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    photons = sparse.diags((n_values - window.center).astype(float))
    return (
        0.5 * h_z * sparse.kron(pauli_z, sparse.identity(window.size))
        + omega * sparse.kron(sparse.identity(2), photons)
        + coupling * sparse.kron(pauli_x, field)
    ).tocsr()


class _ChainModel:
    """
    Tridiagonal block Hamiltonian of the two-mode Jaynes-Cummings model.

    Chain position p = 2 (n1 - lower) + e. Diagonal Delta e - h_z/2 (the
    omega N part is factored out), couplings 2 g~2 sqrt(n2) between p even and
    p + 1, and 2 g~1 sqrt(n1 + 1) between p odd and p + 1.
    """

    def __init__(self, h_z, omega, couplings, window1: FockWindow, semiclassical_elements: bool):
        self.h_z = float(h_z)
        self.omega = float(omega)
        self.g1, self.g2 = (float(g) for g in couplings)
        self.window1 = window1
        self.semiclassical = semiclassical_elements
        length = 2 * window1.size
        positions = np.arange(length)
        self.chain_n1 = window1.lower + positions // 2
        self.chain_spin = positions % 2
        self.diagonal = (self.h_z - self.omega) * self.chain_spin - 0.5 * self.h_z
        self._shared = None
        if semiclassical_elements:
            off = np.where(positions[:-1] % 2 == 0, 2.0 * self.g2, 2.0 * self.g1)
            self._shared = _tridiagonal_eigensystem(self.diagonal, off)

    @property
    def length(self) -> int:
        return self.chain_n1.size

    def chain_n2(self, excitation: int) -> np.ndarray:
        return excitation - self.chain_n1 - self.chain_spin

    def valid_length(self, excitation: int) -> int:
        if self.semiclassical:
            return self.length
        return int(np.count_nonzero(self.chain_n2(excitation) >= 0))

    def evolve(self, excitation: int, block: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Block amplitudes at every time, shape (T, L)."""
        states = np.zeros((times.size, self.length), dtype=complex)
        stop = self.valid_length(excitation)
        if stop == 0:
            return states
        if self._shared is not None:
            values, vectors = self._shared
        else:
            positions = np.arange(stop - 1)
            n1 = self.chain_n1[:stop - 1]
            n2 = self.chain_n2(excitation)[:stop - 1]
            off = np.where(
                positions % 2 == 0,
                2.0 * self.g2 * np.sqrt(np.maximum(n2, 0)),
                2.0 * self.g1 * np.sqrt(n1 + 1.0),
            )
            values, vectors = _tridiagonal_eigensystem(self.diagonal[:stop], off)
        coefficients = vectors.T @ block[:stop]
        phases = np.exp(-1j * np.outer(times, values))
        states[:, :stop] = (phases * coefficients) @ vectors.T
        return states


def _tridiagonal_eigensystem(diagonal: np.ndarray, off: np.ndarray):
    if diagonal.size == 1:
        return diagonal.astype(float), np.ones((1, 1))
    return linalg.eigh_tridiagonal(diagonal, off)


def evolve_two_mode_jc_fock(
    h_z: float,
    omega: float,
    couplings: Sequence[float],
    initial: ExcitationBlockEnsemble,
    times: Sequence[float],
    *,
    semiclassical_elements: bool = False,
    threads: int = 1,
) -> FockTrajectory:
    """
    Two-mode Jaynes-Cummings model
    H = h_z/2 sigma_z + omega (a1^+a1 + a2^+a2) + sum_k g~_k (sigma_+ a_k + sigma_- a_k^+)
    evolved block by block in the conserved excitation number.

    Args:
        h_z: Level splitting
        omega: Common mode frequency
        couplings: Bare (g~1, g~2); the effective (g1, g2) with
            semiclassical_elements, where one N-independent chain is shared
        initial: Block ensemble from build_initial_fock_state
        times: Output times
        semiclassical_elements: Replace sqrt(n_k) by alpha_k
        threads: Worker threads over batches of blocks

    Raises:
        FockLeakageError: Weight above 1e-8 at a truncated chain edge
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    model = _ChainModel(h_z, omega, couplings, initial.window1, semiclassical_elements)
    elapsed = times - initial.time
    excitation = initial.excitation_numbers
    batches = [range(start, min(start + BLOCK_BATCH, excitation.size))
               for start in range(0, excitation.size, BLOCK_BATCH)]

    def evolve_batch(indices):
        return [model.evolve(int(excitation[b]), initial.blocks[b], elapsed) for b in indices]

    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = executor.map(evolve_batch, batches)
            reduction = _BlockReduction(model, excitation, times)
            for batch in results:
                for states in batch:
                    reduction.add(states)
    else:
        reduction = _BlockReduction(model, excitation, times)
        for indices in batches:
            for states in evolve_batch(indices):
                reduction.add(states)

    return reduction.trajectory(initial)


class _BlockReduction:
    """Ordered accumulation of marginals, densities and edge weights over blocks."""

    def __init__(self, model: _ChainModel, excitation: np.ndarray, times: np.ndarray):
        self.model = model
        self.excitation = excitation
        self.times = times
        window1 = model.window1
        self.n2_low = max(0, int(excitation[0]) - window1.upper - 1)
        self.n2_high = max(int(excitation[-1]) - window1.lower, self.n2_low)
        self.mode1 = np.zeros((times.size, window1.size))
        self.mode2 = np.zeros((times.size, self.n2_high - self.n2_low + 1))
        self.up = np.zeros(times.size)
        self.down = np.zeros(times.size)
        self.coherence = np.zeros(times.size, dtype=complex)
        self.block_norms = np.zeros((times.size, excitation.size))
        self.edges = {"n1-upper": np.zeros(times.size)}
        if window1.lower > 0:
            self.edges["n1-lower"] = np.zeros(times.size)
        if model.semiclassical:
            self.edges["n2-lower"] = np.zeros(times.size)
        self.final = np.zeros((excitation.size, model.length), dtype=complex)
        self._previous = None
        self._index = 0

    def add(self, states: np.ndarray):
        index = self._index
        n_ex = int(self.excitation[index])
        weights = np.abs(states) ** 2
        n2 = self.model.chain_n2(n_ex)
        stop = self.model.valid_length(n_ex)

        self.block_norms[:, index] = weights.sum(axis=1)
        self.mode1 += weights.reshape(self.times.size, -1, 2).sum(axis=2)
        if np.any(n2 >= 0):
            n_values, marginal = marginal_from_chain(weights[:, None, :], self.model.chain_n1, n2[None, :], mode=1)
            self.mode2[:, n_values - self.n2_low] += marginal

        up, down = states[:, 1::2], states[:, 0::2]
        self.up += np.sum(np.abs(up) ** 2, axis=1)
        self.down += np.sum(np.abs(down) ** 2, axis=1)
        if self._previous is not None:
            # |up, n1, n2> in block N pairs with |down, n1, n2> in block N - 1
            self.coherence += np.sum(up * self._previous[:, 0::2].conj(), axis=1)

        if stop == self.model.length:
            self.edges["n1-upper"] += weights[:, -EDGE_DEPTH:].sum(axis=1)
        if "n1-lower" in self.edges:
            self.edges["n1-lower"] += weights[:, :EDGE_DEPTH].sum(axis=1)
        if "n2-lower" in self.edges:
            self.edges["n2-lower"] += weights[:, n2 < 0].sum(axis=1)

        self.final[index] = states[-1]
        self._previous = states
        self._index += 1

    def trajectory(self, initial: ExcitationBlockEnsemble) -> FockTrajectory:
        edges = {edge: float(values.max()) for edge, values in self.edges.items()}
        _raise_on_leakage(edges)

        drift = float(np.max(np.abs(self.block_norms - initial.block_norms()[None, :])))
        if drift > 1e-9:
            logger.warning("excitation block norms drift by %.3e", drift)

        densities = np.zeros((self.times.size, 2, 2), dtype=complex)
        densities[:, 0, 0] = self.up
        densities[:, 1, 1] = self.down
        densities[:, 0, 1] = self.coherence * np.exp(-1j * self.model.omega * self.times)
        densities[:, 1, 0] = densities[:, 0, 1].conj()

        marginals = {
            0: (self.model.window1.n_values, self.mode1),
            1: (np.arange(self.n2_low, self.n2_high + 1), self.mode2),
        }
        final = ExcitationBlockEnsemble(
            self.final, initial.n_min, initial.window1, time=self.times[-1], frequency=self.model.omega
        )
        return FockTrajectory(
            self.times, marginals, densities, final, block_norms=self.block_norms, edge_weights=edges
        )


def photon_marginal(source, mode: int = 0) -> Dict[str, np.ndarray]:
    """
    Photon-number distribution of one mode and its first four cumulants,
    taken from the distribution directly.

    Args:
        source: FockEnsemble, ExcitationBlockEnsemble or FockTrajectory
        mode: Mode index

    Returns:
        Dict with "n_values", "probabilities" and "cumulants"
        (for a trajectory the last two carry a leading time axis)
    """
    n_values, probabilities = source.photon_distribution(mode)
    return {
        "n_values": n_values,
        "probabilities": probabilities,
        "cumulants": distribution_cumulants(n_values, probabilities),
    }


def reduced_matter_density(source) -> np.ndarray:
    """rho_M of an ensemble (d, d) or of every trajectory time (T, d, d)."""
    if isinstance(source, FockTrajectory):
        return source.densities
    return source.reduced_density()


def purity(rho) -> Union[float, np.ndarray]:
    """Tr rho^2 for one density matrix or a batch."""
    rho = np.asarray(rho, dtype=complex)
    values = np.einsum("...ij,...ji->...", rho, rho).real
    return float(values) if values.ndim == 0 else values
