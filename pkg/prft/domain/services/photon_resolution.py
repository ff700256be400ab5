"""Photon Resolution - Photon-resolved operators and Fock projector expectations"""
import logging
from typing import Sequence

import numpy as np

from prft.domain.entities import (
    CountingGrid,
    GeneralizedPropagatorSet,
    MatterState,
    PhotonResolvedOperators,
)
from prft.domain.exceptions import CoverageError, InvalidGridError, InvalidStateError
from prft.domain.services.jaynes_cummings import to_schrodinger_picture
from prft.domain.services.model_factory import spin_half_operators

logger = logging.getLogger(__name__)

ALIASING_THRESHOLD = 1e-8
SUPPORT_THRESHOLD = 1e-12


def photon_resolved_operators(propset: GeneralizedPropagatorSet, t: float) -> PhotonResolvedOperators:
    """
    U^{(m)}(t) = (1/N) sum_j U_{chi_j}(t) e^{-i m chi_j} over a uniform grid.

    Orders run over -N/2 .. N/2 - 1. A non-negligible U^{(-N/2)} means the
    photon support exceeds the grid and is logged as aliasing.

    Raises:
        InvalidGridError: If the propagators were not sampled on a CountingGrid
        CoverageError: If t is not a stored time
    """
    if not isinstance(propset.points, CountingGrid):
        raise InvalidGridError("photon-resolved operators need a uniform counting grid")
    matrices = propset.at(t)
    n_points = matrices.shape[0]
    transformed = np.fft.fft(matrices, axis=0) / n_points
    orders = np.rint(np.fft.fftfreq(n_points, d=1.0 / n_points)).astype(int)
    order = np.argsort(orders)
    orders, transformed = orders[order], transformed[order]

    aliasing = float(np.max(np.abs(transformed[0])))
    if aliasing > ALIASING_THRESHOLD:
        logger.warning(
            "photon-resolved operators alias: ||U^(%d)|| = %.3e at t=%s (grid of %d points)",
            orders[0], aliasing, t, n_points,
        )
    return PhotonResolvedOperators(orders, transformed, propset.counted_phase, t, aliasing)


def _scattered_amplitudes(operators: PhotonResolvedOperators, state: MatterState):
    phase_free = operators.phase_free()
    support = phase_free.support(SUPPORT_THRESHOLD)
    vectors = np.stack([phase_free.operator(int(m)) @ state.amplitudes for m in support])
    return support, vectors


def photon_distribution(
    operators: PhotonResolvedOperators,
    state: MatterState,
    n_values: Sequence[int],
    amplitudes: Sequence[complex],
    targets: Sequence[int],
) -> np.ndarray:
    """
    <P_n> for every target n,

        <P_n> = || sum_m a_{n-m} U0^{(m)} |phi> ||^2
              = sum_{m1,m2} a*_{n-m2} a_{n-m1} <U0^{(m2)+} U0^{(m1)}>,

    with the drive phase removed from the operators and carried by a_n.

    Raises:
        CoverageError: If some n - m with active m falls outside n_values
    """
    n_values = np.asarray(n_values, dtype=int)
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if n_values.shape != amplitudes.shape:
        raise InvalidStateError("one amplitude per photon number is required")
    if state.dimension != operators.dimension:
        raise InvalidStateError("matter state and operators differ in dimension")
    if np.any(np.diff(n_values) != 1):
        raise InvalidStateError("photon numbers must be consecutive")
    support, vectors = _scattered_amplitudes(operators, state)

    targets = np.atleast_1d(np.asarray(targets, dtype=int))
    sources = targets[:, None] - support[None, :]
    if sources.min() < n_values[0] or sources.max() > n_values[-1]:
        raise CoverageError(
            f"photonic window [{n_values[0]}, {n_values[-1]}] does not cover n - m for "
            f"n in [{targets.min()}, {targets.max()}] and m in [{support.min()}, {support.max()}]"
        )
    coefficients = amplitudes[sources - n_values[0]]
    final = np.einsum("nm,mi->ni", coefficients, vectors)
    return np.sum(np.abs(final) ** 2, axis=1)


def fock_projector_expectation(
    operators: PhotonResolvedOperators,
    state: MatterState,
    n_values: Sequence[int],
    amplitudes: Sequence[complex],
    n: int,
) -> float:
    return float(photon_distribution(operators, state, n_values, amplitudes, [n])[0])


def spin_expectations(propset: GeneralizedPropagatorSet, state: MatterState) -> np.ndarray:
    """
    <sigma_x>, <sigma_y>, <sigma_z> under the physical propagator, shape (T, 3).

    Rotating-picture sets are converted to the Schrodinger picture first.
    """
    if propset.dimension != 2:
        raise InvalidStateError("spin expectations need a two-level matter system")
    physical = propset.at_zero_field()
    if propset.picture == "rotating":
        physical = to_schrodinger_picture(physical, propset.frame_frequency, propset.times)
    evolved = physical @ state.amplitudes
    ops = spin_half_operators()
    return np.stack(
        [np.einsum("ti,ij,tj->t", evolved.conj(), ops[key], evolved).real for key in ("x", "y", "z")],
        axis=1,
    )
