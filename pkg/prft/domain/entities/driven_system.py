"""Driven System Domain Entity"""
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from prft.domain.entities.mode_spec import ModeSpec
from prft.domain.exceptions import CommensurabilityError, InvalidSystemError


def _frozen(matrix) -> np.ndarray:
    array = np.array(matrix, dtype=complex)
    array.setflags(write=False)
    return array


def common_frequency(
    frequencies: Sequence[float],
    *,
    max_denominator: int = 64,
    tolerance: float = 1e-9,
) -> float:
    """
    Greatest common frequency of a set of commensurate mode frequencies.

    Every ratio omega_k / omega_0 is reconstructed as a fraction with
    denominator <= max_denominator; the base frequency is omega_0 times the
    gcd of those fractions.

    Raises:
        CommensurabilityError: If some ratio has no such fraction within tolerance
    """
    reference = float(frequencies[0])
    ratios = []
    for frequency in frequencies:
        ratio = float(frequency) / reference
        fraction = Fraction(ratio).limit_denominator(max_denominator)
        if abs(ratio - float(fraction)) > tolerance * max(1.0, abs(ratio)):
            raise CommensurabilityError(
                f"frequencies {reference} and {frequency} are not commensurate "
                f"(ratio {ratio!r} has no fraction with denominator <= {max_denominator})"
            )
        ratios.append(fraction)

    denominator = 1
    for fraction in ratios:
        denominator = math.lcm(denominator, fraction.denominator)
    numerator = 0
    for fraction in ratios:
        numerator = math.gcd(numerator, fraction.numerator * (denominator // fraction.denominator))
    return reference * numerator / denominator


class DrivenSystem:
    """
    Driven System Domain Entity

    Semiclassical light-matter system: a d-level matter Hamiltonian H0 and,
    per classical mode k, a matter coupling operator A_k (the operator that
    multiplies the annihilator a_k). The counting-field generalized
    Hamiltonian is

        H_chi(t) = H0 + sum_k g_k (A_k e^{-i(w_k t + psi_k)} + A_k^+ e^{+i(w_k t + psi_k)}),

    with psi_k = phi_k + chi_k. For Hermitian A_k this is
    H0 + 2 g_k A_k cos(w_k t + psi_k); rotating-wave couplings (A = sigma_+)
    are allowed only when declared.

    Values are immutable after construction.
    """

    HERMITICITY_TOLERANCE = 1e-12
    MAX_DIMENSION = 64

    def __init__(
        self,
        h0,
        operators: Sequence,
        modes: Sequence[ModeSpec],
        *,
        rotating_wave: bool = False,
        require_period: bool = True,
    ):
        """
        Initialize a DrivenSystem.

        Args:
            h0: d x d Hermitian matter Hamiltonian
            operators: Coupling operators A_k, one per mode
            modes: ModeSpec per coupling
            rotating_wave: Allow non-Hermitian A_k (JC form)
            require_period: Raise if the frequencies are incommensurate

        Raises:
            InvalidSystemError: Shape or Hermiticity violations (names the matrix)
            CommensurabilityError: Incommensurate modes with require_period
        """
        self.h0 = self._validate_h0(h0)
        self.dimension = self.h0.shape[0]
        self.modes: Tuple[ModeSpec, ...] = tuple(modes)
        self.operators = self._validate_operators(operators, self.modes, self.dimension, rotating_wave)
        self.rotating_wave = bool(rotating_wave)
        self.base_frequency = self._resolve_base_frequency(self.modes, require_period)
        self.period = None if self.base_frequency is None else 2.0 * math.pi / self.base_frequency

    @staticmethod
    def _is_hermitian(matrix: np.ndarray) -> bool:
        return float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0)) < DrivenSystem.HERMITICITY_TOLERANCE

    @staticmethod
    def _validate_h0(h0) -> np.ndarray:
        h0 = _frozen(h0)
        if h0.ndim != 2 or h0.shape[0] != h0.shape[1]:
            raise InvalidSystemError(f"H0 must be a square matrix, got shape {h0.shape}")
        if h0.shape[0] > DrivenSystem.MAX_DIMENSION:
            raise InvalidSystemError(
                f"matter dimension {h0.shape[0]} exceeds {DrivenSystem.MAX_DIMENSION}"
            )
        if not np.all(np.isfinite(h0)):
            raise InvalidSystemError("H0 has non-finite entries")
        if not DrivenSystem._is_hermitian(h0):
            raise InvalidSystemError("H0 is not Hermitian")
        return h0

    @staticmethod
    def _validate_operators(operators, modes, dimension, rotating_wave) -> Tuple[np.ndarray, ...]:
        operators = tuple(_frozen(op) for op in operators)
        if len(operators) != len(modes):
            raise InvalidSystemError(
                f"{len(operators)} coupling operators for {len(modes)} modes"
            )
        if not operators:
            raise InvalidSystemError("at least one driven mode is required")
        for k, op in enumerate(operators):
            if op.shape != (dimension, dimension):
                raise InvalidSystemError(
                    f"coupling operator {k} has shape {op.shape}, expected {(dimension, dimension)}"
                )
            if not np.all(np.isfinite(op)):
                raise InvalidSystemError(f"coupling operator {k} has non-finite entries")
            if not rotating_wave and not DrivenSystem._is_hermitian(op):
                raise InvalidSystemError(
                    f"coupling operator {k} is not Hermitian (declare rotating_wave for JC couplings)"
                )
        return operators

    @staticmethod
    def _resolve_base_frequency(modes, require_period) -> Optional[float]:
        try:
            return common_frequency([mode.frequency for mode in modes])
        except CommensurabilityError:
            if require_period:
                raise
            return None

    # -- evaluation -------------------------------------------------------

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def phases(self) -> np.ndarray:
        return np.array([mode.phase for mode in self.modes])

    @property
    def couplings(self) -> np.ndarray:
        return np.array([mode.coupling for mode in self.modes])

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([mode.frequency for mode in self.modes])

    def require_period(self) -> float:
        if self.period is None:
            raise CommensurabilityError("mode frequencies are incommensurate; no Floquet period")
        return self.period

    def _drive_phases(self, t: float, fields: np.ndarray) -> np.ndarray:
        fields = np.atleast_2d(np.asarray(fields, dtype=float))
        if fields.shape[1] != self.n_modes:
            raise InvalidSystemError(
                f"counting fields have {fields.shape[1]} entries, system has {self.n_modes} modes"
            )
        return self.frequencies[None, :] * t + self.phases[None, :] + fields

    def hamiltonian(self, t: float, fields: np.ndarray) -> np.ndarray:
        """
        H_chi(t) for a batch of counting-field vectors.

        Args:
            t: Time
            fields: Array (P, K) of counting fields chi_k per point

        Returns:
            Array (P, d, d)
        """
        theta = self._drive_phases(t, fields)
        result = np.broadcast_to(self.h0, (theta.shape[0],) + self.h0.shape).copy()
        for k, (op, g) in enumerate(zip(self.operators, self.couplings)):
            phase = np.exp(-1j * theta[:, k])[:, None, None]
            result += g * (op[None] * phase + op.conj().T[None] * phase.conj())
        return result

    def hamiltonian_time_derivative(self, t: float, fields: np.ndarray) -> np.ndarray:
        """dH_chi/dt, shape (P, d, d)."""
        theta = self._drive_phases(t, fields)
        result = np.zeros((theta.shape[0],) + self.h0.shape, dtype=complex)
        for k, (op, g, w) in enumerate(zip(self.operators, self.couplings, self.frequencies)):
            phase = np.exp(-1j * theta[:, k])[:, None, None]
            result += g * w * (-1j * op[None] * phase + 1j * op.conj().T[None] * phase.conj())
        return result

    def with_modes(self, modes: List[ModeSpec]) -> "DrivenSystem":
        """Same matter operators with replaced modes (e.g. shifted phases)."""
        return DrivenSystem(
            self.h0,
            self.operators,
            modes,
            rotating_wave=self.rotating_wave,
            require_period=self.period is not None,
        )

    def __repr__(self):
        return (
            f"<DrivenSystem d={self.dimension} modes={self.n_modes} "
            f"period={self.period} rotating_wave={self.rotating_wave}>"
        )
