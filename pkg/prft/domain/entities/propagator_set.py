"""Generalized Propagator Domain Entities"""
from typing import Optional, Sequence

import numpy as np

from prft.domain.entities.counting_grid import CountingPoints
from prft.domain.exceptions import CoverageError, InvalidGridError


class GeneralizedPropagatorSet:
    """
    Generalized Propagator Set Domain Entity

    The matrices U_{phi+chi_j}(t_m) for every counting point chi_j and time
    t_m. The drive phases phi of the system are carried in `phases`; the
    counting field is added on the counted mode only.

    Business Rules:
    - times start at 0 and increase strictly
    - U(0) is the identity at every counting point
    - picture is "schrodinger" or "rotating" (frame exp(-i w t sigma_z / 2))
    """

    VALID_PICTURES = {"schrodinger", "rotating"}
    TIME_TOLERANCE = 1e-9

    def __init__(
        self,
        points: CountingPoints,
        times: Sequence[float],
        matrices: np.ndarray,
        phases: Sequence[float],
        picture: str = "schrodinger",
        frame_frequency: Optional[float] = None,
    ):
        self.points = points
        self.times = self._validate_times(times)
        self.matrices = self._validate_matrices(matrices, points.size, self.times.size)
        self.phases = np.asarray(phases, dtype=float)
        self.picture = self._validate_picture(picture, frame_frequency)
        self.frame_frequency = frame_frequency

    @staticmethod
    def _validate_times(times) -> np.ndarray:
        times = np.asarray(times, dtype=float).reshape(-1)
        if times.size == 0:
            raise InvalidGridError("at least one time stamp is required")
        if times[0] != 0.0:
            raise InvalidGridError("time stamps must start at 0")
        if np.any(np.diff(times) <= 0):
            raise InvalidGridError("time stamps must increase strictly")
        times.setflags(write=False)
        return times

    @staticmethod
    def _validate_matrices(matrices, n_points, n_times) -> np.ndarray:
        matrices = np.asarray(matrices, dtype=complex)
        if matrices.ndim != 4 or matrices.shape[:2] != (n_points, n_times) or matrices.shape[2] != matrices.shape[3]:
            raise InvalidGridError(
                f"propagators must have shape ({n_points}, {n_times}, d, d), got {matrices.shape}"
            )
        matrices.setflags(write=False)
        return matrices

    @staticmethod
    def _validate_picture(picture, frame_frequency) -> str:
        if picture not in GeneralizedPropagatorSet.VALID_PICTURES:
            raise InvalidGridError(f"unknown picture '{picture}'")
        if picture == "rotating" and frame_frequency is None:
            raise InvalidGridError("rotating-picture propagators need the frame frequency")
        return picture

    @property
    def dimension(self) -> int:
        return self.matrices.shape[-1]

    @property
    def mode(self) -> int:
        return self.points.mode

    @property
    def counted_phase(self) -> float:
        return float(self.phases[self.points.mode])

    def time_index(self, t: float) -> int:
        """
        Raises:
            CoverageError: If t is not one of the stored time stamps
        """
        index = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[index] - t) > self.TIME_TOLERANCE * max(1.0, abs(t)):
            raise CoverageError(f"no propagators stored at t={t}")
        return index

    def at(self, t: float) -> np.ndarray:
        """Propagators (P, d, d) at one stored time."""
        return self.matrices[:, self.time_index(t)]

    def at_zero_field(self) -> np.ndarray:
        """Physical propagators U_phi(t_m), shape (T, d, d)."""
        return self.matrices[self.points.zero_index]

    def unitarity_defect(self) -> float:
        """max_t || U^+ U - 1 ||_max at chi = 0."""
        physical = self.at_zero_field()
        product = np.conj(np.swapaxes(physical, -1, -2)) @ physical
        return float(np.max(np.abs(product - np.eye(self.dimension))))

    def identity_defect(self) -> float:
        return float(np.max(np.abs(self.matrices[:, 0] - np.eye(self.dimension))))

    def __repr__(self):
        return (
            f"<GeneralizedPropagatorSet points={self.points.size} times={self.times.size} "
            f"d={self.dimension} picture={self.picture}>"
        )


class PhotonResolvedOperators:
    """
    Photon-resolved evolution operators U^{(m)}(t) of one counted mode.

    U^{(m)} carries the drive phase of the set it was taken from, i.e.
    U_{phi+chi} = sum_m U^{(m)} e^{i m chi}. `phase_free()` strips it so that
    U_{phi+chi} = sum_m U0^{(m)} e^{i m (phi + chi)}.
    """

    def __init__(self, orders, operators, phase: float, t: float, aliasing_norm: float = 0.0):
        self.orders = np.asarray(orders, dtype=int)
        self.operators = np.asarray(operators, dtype=complex)
        if self.operators.shape[0] != self.orders.size:
            raise InvalidGridError("one operator per photon order is required")
        self.phase = float(phase)
        self.t = float(t)
        self.aliasing_norm = float(aliasing_norm)

    @property
    def dimension(self) -> int:
        return self.operators.shape[-1]

    def operator(self, m: int) -> np.ndarray:
        hits = np.flatnonzero(self.orders == m)
        if hits.size == 0:
            return np.zeros((self.dimension, self.dimension), dtype=complex)
        return self.operators[hits[0]]

    def as_dict(self, threshold: float = 0.0) -> dict:
        return {
            int(m): op
            for m, op in zip(self.orders, self.operators)
            if np.max(np.abs(op)) > threshold
        }

    def phase_free(self) -> "PhotonResolvedOperators":
        factors = np.exp(-1j * self.orders * self.phase)[:, None, None]
        return PhotonResolvedOperators(self.orders, self.operators * factors, 0.0, self.t, self.aliasing_norm)

    def support(self, threshold: float = 1e-12) -> np.ndarray:
        """Orders whose operator has max-norm above threshold."""
        norms = np.max(np.abs(self.operators), axis=(1, 2))
        return np.sort(self.orders[norms > threshold])

    def resummed(self, chi) -> np.ndarray:
        """sum_m U^{(m)} e^{i m chi} for an array of chi values, shape (P, d, d)."""
        chi = np.atleast_1d(np.asarray(chi, dtype=float))
        factors = np.exp(1j * np.outer(chi, self.orders))
        return np.einsum("pm,mij->pij", factors, self.operators)

    def parseval_defect(self) -> float:
        """max || sum_m U^{(m)+} U^{(m)} - 1 ||."""
        total = np.einsum("mki,mkj->ij", self.operators.conj(), self.operators)
        return float(np.max(np.abs(total - np.eye(self.dimension))))

    def __repr__(self):
        return f"<PhotonResolvedOperators t={self.t} support={self.support().tolist()}>"
