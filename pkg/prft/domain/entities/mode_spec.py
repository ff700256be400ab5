"""Mode Domain Entity"""
import math
from typing import Optional

from prft.domain.exceptions import InvalidSystemError


class ModeSpec:
    """
    Photonic Mode Domain Entity

    A classical drive mode seen by the matter system: frequency, coherent
    amplitude, phase and the effective light-matter coupling g = g_bare * alpha.

    Exactly one coupling description is accepted: either the bare coupling
    together with the amplitude, or the effective coupling (optionally with
    the amplitude, from which the bare coupling is then inferred).
    """

    TWO_PI = 2.0 * math.pi

    def __init__(
        self,
        frequency: float,
        *,
        coupling: Optional[float] = None,
        bare_coupling: Optional[float] = None,
        amplitude: Optional[float] = None,
        phase: float = 0.0,
        label: Optional[str] = None,
    ):
        """
        Initialize a ModeSpec entity.

        Args:
            frequency: Mode angular frequency omega_k (> 0, units of h_z)
            coupling: Effective coupling g_k
            bare_coupling: Single-photon coupling g~_k (requires amplitude)
            amplitude: Coherent amplitude alpha_k (>= 0), n_bar = alpha_k^2
            phase: Drive phase phi_k, stored modulo 2 pi
            label: Optional display name

        Raises:
            InvalidSystemError: If any field violates domain rules
        """
        self.frequency = self._validate_frequency(frequency)
        self.amplitude = self._validate_amplitude(amplitude)
        self.coupling, self.bare_coupling = self._resolve_coupling(
            coupling, bare_coupling, self.amplitude
        )
        self.phase = self._validate_phase(phase)
        self.label = label

    @staticmethod
    def _validate_frequency(frequency: float) -> float:
        try:
            frequency = float(frequency)
        except (TypeError, ValueError):
            raise InvalidSystemError("mode frequency must be a number")
        if not math.isfinite(frequency) or frequency <= 0:
            raise InvalidSystemError(f"mode frequency must be positive, got {frequency}")
        return frequency

    @staticmethod
    def _validate_amplitude(amplitude: Optional[float]) -> Optional[float]:
        if amplitude is None:
            return None
        amplitude = float(amplitude)
        if not math.isfinite(amplitude) or amplitude < 0:
            raise InvalidSystemError(f"mode amplitude must be >= 0, got {amplitude}")
        return amplitude

    @staticmethod
    def _resolve_coupling(coupling, bare_coupling, amplitude):
        """
        Business Rules:
        - exactly one of {bare_coupling + amplitude, coupling}
        - stored g equals g_bare * alpha exactly when built from the bare pair
        """
        if (coupling is None) == (bare_coupling is None):
            raise InvalidSystemError(
                "give either the effective coupling or the bare coupling with an amplitude"
            )
        if bare_coupling is not None:
            if amplitude is None:
                raise InvalidSystemError("bare coupling requires the mode amplitude")
            bare_coupling = float(bare_coupling)
            return bare_coupling * amplitude, bare_coupling

        coupling = float(coupling)
        if not math.isfinite(coupling):
            raise InvalidSystemError("mode coupling must be finite")
        bare = coupling / amplitude if amplitude else None
        return coupling, bare

    @staticmethod
    def _validate_phase(phase: float) -> float:
        phase = float(phase)
        if not math.isfinite(phase):
            raise InvalidSystemError("mode phase must be finite")
        return phase % ModeSpec.TWO_PI

    @property
    def mean_photons(self) -> Optional[float]:
        return None if self.amplitude is None else self.amplitude ** 2

    def with_phase(self, phase: float) -> "ModeSpec":
        """Copy of this mode with a different drive phase."""
        return ModeSpec(
            self.frequency,
            coupling=self.coupling,
            amplitude=self.amplitude,
            phase=phase,
            label=self.label,
        )

    def __repr__(self):
        return (
            f"<ModeSpec omega={self.frequency} g={self.coupling} "
            f"phi={self.phase:.6f} alpha={self.amplitude}>"
        )
