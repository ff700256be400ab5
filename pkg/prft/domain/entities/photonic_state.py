"""Photonic Initial State Domain Entity"""
import math
from typing import Optional

import numpy as np

from prft.domain.exceptions import InvalidStateError


class PhotonicInitialState:
    """
    Photonic Initial State Domain Entity

    Gaussian photon-number amplitudes of one mode,

        a_n ~ exp(-(n - n_bar)^2 / (4 sigma^2)) * exp(-i phi n),

    i.e. a slowly varying modulus with a linear phase. The "coherent" family
    ties sigma^2 to n_bar (the Gaussian replacement of the Poisson
    distribution); "gaussian-squeezed" takes an independent variance.
    """

    VALID_FAMILIES = {"coherent", "gaussian-squeezed"}
    TAIL_SIGMAS = 8

    def __init__(
        self,
        mean: float,
        variance: Optional[float] = None,
        phase: float = 0.0,
        family: str = "coherent",
    ):
        """
        Args:
            mean: Mean photon number n_bar
            variance: Photon-number variance sigma^2 (required for squeezed states)
            phase: Drive phase phi of the mode
            family: "coherent" or "gaussian-squeezed"

        Raises:
            InvalidStateError: If any field violates domain rules
        """
        self.family = self._validate_family(family)
        self.mean = self._validate_mean(mean)
        self.variance = self._validate_variance(variance, self.mean, self.family)
        self.phase = float(phase) % (2.0 * math.pi)

    @staticmethod
    def _validate_family(family: str) -> str:
        if family not in PhotonicInitialState.VALID_FAMILIES:
            raise InvalidStateError(f"unknown photonic family '{family}'")
        return family

    @staticmethod
    def _validate_mean(mean: float) -> float:
        mean = float(mean)
        if not math.isfinite(mean) or mean < 0:
            raise InvalidStateError(f"mean photon number must be >= 0, got {mean}")
        return mean

    @staticmethod
    def _validate_variance(variance, mean, family) -> float:
        """
        Business Rules:
        - coherent: sigma^2 = n_bar (a given variance must agree)
        - every family: sigma^2 > 0
        """
        if family == "coherent":
            if variance is not None and abs(float(variance) - mean) > 1e-9 * max(1.0, mean):
                raise InvalidStateError("coherent states have variance equal to the mean")
            variance = mean
        if variance is None:
            raise InvalidStateError("gaussian-squeezed states need an explicit variance")
        variance = float(variance)
        if not math.isfinite(variance) or variance <= 0:
            raise InvalidStateError(f"photon-number variance must be positive, got {variance}")
        return variance

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    def amplitudes(self, n_values) -> np.ndarray:
        """Normalized complex amplitudes a_n over the supplied photon numbers."""
        n_values = np.asarray(n_values)
        modulus = np.exp(-((n_values - self.mean) ** 2) / (4.0 * self.variance))
        amplitudes = modulus * np.exp(-1j * self.phase * n_values)
        return amplitudes / np.linalg.norm(amplitudes)

    def probabilities(self, n_values) -> np.ndarray:
        return np.abs(self.amplitudes(n_values)) ** 2

    def window_bounds(self, drift: float = 0.0, minimum_half_width: int = 40):
        """
        Default retained photon numbers: max(8 sigma, minimum) around n_bar,
        padded on both sides by the expected drift.
        """
        half_width = int(math.ceil(max(self.TAIL_SIGMAS * self.sigma, minimum_half_width) + abs(drift)))
        center = int(round(self.mean))
        return max(center - half_width, 0), center + half_width

    def __repr__(self):
        return (
            f"<PhotonicInitialState n_bar={self.mean} sigma2={self.variance} "
            f"phi={self.phase:.6f} family={self.family}>"
        )
