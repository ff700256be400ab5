"""Generalized Propagator - Numeric integration of H_chi(t) over counting points"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from prft.domain.entities import CountingPoints, DrivenSystem, GeneralizedPropagatorSet
from prft.domain.exceptions import IntegrationError, InvalidGridError

logger = logging.getLogger(__name__)

_SQRT3 = math.sqrt(3.0)
# commutator-free fourth-order exponential scheme
CF4_WEIGHTS = ((3.0 - 2.0 * _SQRT3) / 12.0, (3.0 + 2.0 * _SQRT3) / 12.0)
CF4_NODES = (0.5 - _SQRT3 / 6.0, 0.5 + _SQRT3 / 6.0)


class IntegratorSpec:
    """
    Fixed-step integrator settings.

    Args:
        steps_per_period: Maximum step is period / steps_per_period
        threads: Worker threads over chunks of counting points
        chunk_size: Counting points per worker task (default: split evenly)
        min_step: Steps below this raise IntegrationError
    """

    def __init__(self, steps_per_period: int = 2000, threads: int = 1,
                 chunk_size: Optional[int] = None, min_step: float = 1e-14):
        if steps_per_period < 1:
            raise InvalidGridError("steps_per_period must be >= 1")
        if threads < 1:
            raise InvalidGridError("threads must be >= 1")
        self.steps_per_period = int(steps_per_period)
        self.threads = int(threads)
        self.chunk_size = chunk_size
        self.min_step = float(min_step)

    def __repr__(self):
        return f"<IntegratorSpec steps_per_period={self.steps_per_period} threads={self.threads}>"


def hermitian_exponential(matrices: np.ndarray, step: float) -> np.ndarray:
    """exp(-i step H) for a batch (P, d, d) of Hermitian matrices."""
    values, vectors = np.linalg.eigh(matrices)
    phases = np.exp(-1j * step * values)
    return (vectors * phases[:, None, :]) @ np.conj(np.swapaxes(vectors, -1, -2))


class NumericPropagator:
    """
    Integrates i dU/dt = H_chi(t) U for every counting point with the
    commutator-free fourth-order scheme

        U(t + h) = exp(-i h (a1 H1 + a2 H2)) exp(-i h (a2 H1 + a1 H2)) U(t),

    H_i = H_chi(t + c_i h). For real chi every H_chi is Hermitian, so each
    exponential is exact through eigendecomposition and U stays unitary.
    """

    def __init__(self, system: DrivenSystem, spec: Optional[IntegratorSpec] = None):
        self.system = system
        self.spec = spec or IntegratorSpec()

    @property
    def max_step(self) -> float:
        reference = self.system.period
        if reference is None:
            reference = 2.0 * math.pi / float(np.max(self.system.frequencies))
        return reference / self.spec.steps_per_period

    def propagate(self, points: CountingPoints, times: Sequence[float]) -> GeneralizedPropagatorSet:
        """
        Propagators at every counting point and time.

        Raises:
            InvalidGridError: If times do not start at 0 or do not increase
            IntegrationError: Non-finite propagator or step underflow
        """
        times = np.asarray(times, dtype=float).reshape(-1)
        if times.size == 0 or times[0] != 0.0 or np.any(np.diff(times) <= 0):
            raise InvalidGridError("times must start at 0 and increase strictly")

        fields = points.field_vectors(self.system.n_modes)
        chunks = self._chunks(fields.shape[0])
        logger.debug("propagating %d counting points over %d times in %d chunks",
                     fields.shape[0], times.size, len(chunks))

        if self.spec.threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=self.spec.threads) as executor:
                results = list(executor.map(lambda rows: self._integrate(fields[rows], times), chunks))
        else:
            results = [self._integrate(fields[rows], times) for rows in chunks]

        matrices = np.concatenate(results, axis=0)
        return GeneralizedPropagatorSet(points, times, matrices, self.system.phases)

    def _chunks(self, n_points: int):
        size = self.spec.chunk_size or max(1, math.ceil(n_points / self.spec.threads))
        return [slice(start, min(start + size, n_points)) for start in range(0, n_points, size)]

    def _integrate(self, fields: np.ndarray, times: np.ndarray) -> np.ndarray:
        d = self.system.dimension
        n_points = fields.shape[0]
        current = np.broadcast_to(np.eye(d, dtype=complex), (n_points, d, d)).copy()
        result = np.empty((n_points, times.size, d, d), dtype=complex)
        result[:, 0] = current

        (a1, a2), (c1, c2) = CF4_WEIGHTS, CF4_NODES
        for index in range(1, times.size):
            start, stop = times[index - 1], times[index]
            n_steps = max(1, math.ceil((stop - start) / self.max_step - 1e-9))
            h = (stop - start) / n_steps
            if h < self.spec.min_step:
                raise IntegrationError(f"step size {h} underflows at t={start}", chi=fields[:, 0].copy(), t=start)
            for step in range(n_steps):
                t = start + step * h
                h1 = self.system.hamiltonian(t + c1 * h, fields)
                h2 = self.system.hamiltonian(t + c2 * h, fields)
                current = hermitian_exponential(a2 * h1 + a1 * h2, h) @ current
                current = hermitian_exponential(a1 * h1 + a2 * h2, h) @ current
            finite = np.all(np.isfinite(current), axis=(1, 2))
            if not np.all(finite):
                bad = int(np.flatnonzero(~finite)[0])
                raise IntegrationError(
                    f"non-finite propagator at chi={fields[bad].tolist()}, t={stop}",
                    chi=fields[bad].copy(),
                    t=stop,
                )
            result[:, index] = current
        return result


def propagate_generalized(
    system: DrivenSystem,
    grid: CountingPoints,
    times: Sequence[float],
    integrator: Optional[IntegratorSpec] = None,
) -> GeneralizedPropagatorSet:
    return NumericPropagator(system, integrator).propagate(grid, times)


def stroboscopic_power(one_period, n: int) -> np.ndarray:
    """U(n tau) = U(tau)^n for a single matrix or a batch (..., d, d)."""
    if n < 0:
        raise InvalidGridError("stroboscopic power must be >= 0")
    return np.linalg.matrix_power(np.asarray(one_period, dtype=complex), n)
