"""Counting Field Sample Sets"""
import math
from abc import ABC, abstractmethod

import numpy as np

from prft.domain.exceptions import InvalidGridError, WindowError


class CountingPoints(ABC):
    """
    Shared behaviour of counting-field sample sets for one counted mode.

    Subclasses define `chi` (1-D array containing 0) and `negated_indices`,
    the index of -chi_j for every j.
    """

    chi: np.ndarray
    mode: int

    @property
    def size(self) -> int:
        return self.chi.size

    @property
    def zero_index(self) -> int:
        return int(np.flatnonzero(self.chi == 0.0)[0])

    @property
    @abstractmethod
    def negated_indices(self) -> np.ndarray:
        """Index of -chi_j for every j."""
        pass

    @property
    def signed_chi(self) -> np.ndarray:
        """Sample points mapped into (-pi, pi]."""
        return self.chi

    def field_vectors(self, n_modes: int) -> np.ndarray:
        """Counting-field vectors (P, K): chi on the counted mode, 0 elsewhere."""
        if not 0 <= self.mode < n_modes:
            raise InvalidGridError(f"counted mode {self.mode} outside 0..{n_modes - 1}")
        fields = np.zeros((self.size, n_modes))
        fields[:, self.mode] = self.chi
        return fields

    def outward_order(self) -> np.ndarray:
        """Indices sorted by |chi| (zero first), used for branch continuation."""
        signed = self.signed_chi
        return np.lexsort((signed < 0, np.abs(signed)))


class CountingGrid(CountingPoints):
    """
    Uniform counting grid chi_j = 2 pi j / N over one counted mode.

    The grid is the Fourier dual of the photon-number change: it resolves
    |delta n| <= N/2 - 1 without aliasing.
    """

    DEFAULT_POINTS = 256

    def __init__(self, points: int = DEFAULT_POINTS, mode: int = 0):
        self.points = self._validate_points(points)
        self.mode = int(mode)
        self.spacing = 2.0 * math.pi / self.points
        self.chi = self.spacing * np.arange(self.points)
        self.chi.setflags(write=False)

    @staticmethod
    def _validate_points(points: int) -> int:
        if not isinstance(points, (int, np.integer)) or points < 2:
            raise InvalidGridError("counting grid needs an integer number of points >= 2")
        if points & (points - 1):
            raise InvalidGridError(f"counting grid size must be a power of two, got {points}")
        return int(points)

    @property
    def negated_indices(self) -> np.ndarray:
        return (-np.arange(self.points)) % self.points

    @property
    def signed_chi(self) -> np.ndarray:
        return np.where(self.chi > math.pi, self.chi - 2.0 * math.pi, self.chi)

    @property
    def max_window(self) -> int:
        return self.points // 2 - 1

    def check_window(self, window: int) -> int:
        """
        Raises:
            WindowError: If N < 2 W + 2
        """
        if window < 0:
            raise WindowError("photon-number window must be >= 0")
        if self.points < 2 * window + 2:
            raise WindowError(
                f"grid of {self.points} points cannot resolve |dn| <= {window} "
                f"(needs at least {2 * window + 2})"
            )
        return window

    def __repr__(self):
        return f"<CountingGrid N={self.points} mode={self.mode}>"


class CountingStencil(CountingPoints):
    """
    Symmetric finite-difference stencil chi = j h, |j| <= half_width, around 0.

    With half_width 8 it serves cumulants (9-point central differences at
    steps 2h and h, combined by Richardson extrapolation); half_width 2 is
    the five-point quasienergy derivative stencil.
    """

    def __init__(self, step: float, half_width: int = 8, mode: int = 0):
        self.step = self._validate_step(step)
        self.half_width = self._validate_half_width(half_width)
        self.mode = int(mode)
        self.chi = self.step * np.arange(-self.half_width, self.half_width + 1)
        self.chi.setflags(write=False)

    @staticmethod
    def _validate_step(step: float) -> float:
        step = float(step)
        if not math.isfinite(step) or step <= 0 or step > 0.5:
            raise InvalidGridError(f"stencil step must lie in (0, 0.5], got {step}")
        return step

    @staticmethod
    def _validate_half_width(half_width: int) -> int:
        if half_width < 2 or half_width % 2:
            raise InvalidGridError("stencil half-width must be even and >= 2")
        return int(half_width)

    @classmethod
    def adapted_to(cls, kappa1: float, kappa2: float, mode: int = 0, cap: float = 0.05) -> "CountingStencil":
        """
        Stencil whose outer step delta shrinks with the expected photon
        transfer, keeping chi * (|kappa_1| + 3 sqrt|kappa_2|) of order 0.1.
        """
        delta = min(cap, 0.1 / (1.0 + abs(kappa1) + 3.0 * math.sqrt(abs(kappa2))))
        return cls(step=delta / 2.0, mode=mode)

    @property
    def delta(self) -> float:
        return 2.0 * self.step

    @property
    def zero_index(self) -> int:
        return self.half_width

    @property
    def negated_indices(self) -> np.ndarray:
        return np.arange(self.size)[::-1]

    def __repr__(self):
        return f"<CountingStencil h={self.step} half_width={self.half_width} mode={self.mode}>"
