"""Photon Statistics Domain Entities"""
from typing import List, Optional

import numpy as np

from prft.domain.entities.counting_grid import CountingPoints
from prft.domain.exceptions import BranchError, InvalidGridError


class GeneratingFunctionSamples:
    """
    Generating Function Samples Domain Entity

    Values M(chi_j, t_m) of a moment-generating function for one counted
    mode, shape (T, P).

    Kinds:
    - "exact-expectation": two-point tomographic M_dy from full propagators
    - "floquet-asymptotic": M_dy from quasienergies alone
    - "closed-form": analytic two-mode JC expressions
    - "standard-fcs": projective-measurement surrogate (comparator only)
    """

    VALID_KINDS = {"exact-expectation", "floquet-asymptotic", "closed-form", "standard-fcs"}
    NORMALIZATION_TOLERANCE = 1e-10
    CONJUGATION_TOLERANCE = 1e-10
    MIN_MODULUS = 1e-250

    def __init__(self, points: CountingPoints, times, values, kind: str = "exact-expectation"):
        self.points = points
        self.times = np.asarray(times, dtype=float).reshape(-1)
        self.values = self._validate_values(values, self.times.size, points.size)
        self.kind = self._validate_kind(kind)

    @staticmethod
    def _validate_values(values, n_times, n_points) -> np.ndarray:
        values = np.asarray(values, dtype=complex)
        if values.shape != (n_times, n_points):
            raise InvalidGridError(
                f"generating-function samples must have shape ({n_times}, {n_points}), got {values.shape}"
            )
        values.setflags(write=False)
        return values

    @staticmethod
    def _validate_kind(kind: str) -> str:
        if kind not in GeneratingFunctionSamples.VALID_KINDS:
            raise InvalidGridError(f"unknown generating-function kind '{kind}'")
        return kind

    @property
    def mode(self) -> int:
        return self.points.mode

    def normalization_defect(self) -> float:
        return float(np.max(np.abs(self.values[:, self.points.zero_index] - 1.0)))

    def conjugation_defect(self) -> float:
        mirrored = self.values[:, self.points.negated_indices]
        return float(np.max(np.abs(mirrored - self.values.conj())))

    def check_invariants(self) -> List[str]:
        """Names of violated sample invariants (empty when all hold)."""
        violations = []
        if self.normalization_defect() > self.NORMALIZATION_TOLERANCE:
            violations.append(f"M(0) = 1 (defect {self.normalization_defect():.3e})")
        if self.conjugation_defect() > self.CONJUGATION_TOLERANCE:
            violations.append(f"M(-chi) = M(chi)* (defect {self.conjugation_defect():.3e})")
        return violations

    def unwrapped_log(self, radius: int = 8) -> np.ndarray:
        """
        K = log M with the phase unwrapped outward from chi = 0 in both
        directions, shape (T, P).

        Args:
            radius: Number of points on each side of chi = 0 that must be
                regular; the log further out is returned unchecked.

        Raises:
            BranchError: If M vanishes or its phase jumps by more than pi/2
                between neighbours close to chi = 0
        """
        signed = self.points.signed_chi
        positive = np.flatnonzero(signed >= 0)
        positive = positive[np.argsort(signed[positive])]
        negative = np.flatnonzero(signed <= 0)
        negative = negative[np.argsort(-signed[negative])]

        modulus = np.abs(self.values)
        log_values = np.empty(self.values.shape, dtype=complex)
        for path in (positive, negative):
            checked = path[: radius + 1]
            if np.any(modulus[:, checked] < self.MIN_MODULUS):
                raise BranchError("generating function vanishes next to chi = 0; log is undefined")
            raw = np.angle(self.values[:, path])
            jumps = np.abs(np.diff(raw[:, : checked.size], axis=1))
            jumps = np.minimum(jumps, 2.0 * np.pi - jumps)
            if np.any(jumps > np.pi / 2):
                raise BranchError("phase of M jumps by more than pi/2 between neighbouring samples near chi = 0")
            phase = np.unwrap(raw, axis=1)
            phase -= np.round(phase[:, :1] / (2.0 * np.pi)) * 2.0 * np.pi
            with np.errstate(divide="ignore"):
                log_values[:, path] = np.log(modulus[:, path]) + 1j * phase
        return log_values

    def __repr__(self):
        return f"<GeneratingFunctionSamples kind={self.kind} points={self.points.size} times={self.times.size}>"


class PhotonStatistics:
    """
    Photon Statistics Domain Entity

    Per-time dynamical cumulants of one counted mode, the quasiprobability
    kernel on dn in [-W, W] and, when an initial distribution was supplied,
    the redistributed p_n(t).
    """

    def __init__(
        self,
        mode: int,
        times,
        cumulants,
        *,
        quasiprobabilities=None,
        window: Optional[int] = None,
        n_values=None,
        distributions=None,
        caveat: bool = False,
    ):
        self.mode = int(mode)
        self.times = np.asarray(times, dtype=float).reshape(-1)
        self.cumulants = np.asarray(cumulants, dtype=float)
        self.quasiprobabilities = None if quasiprobabilities is None else np.asarray(quasiprobabilities, dtype=float)
        self.window = window
        self.n_values = None if n_values is None else np.asarray(n_values, dtype=int)
        self.distributions = None if distributions is None else np.asarray(distributions, dtype=float)
        self.caveat = caveat

    @property
    def mean_change(self) -> np.ndarray:
        return self.cumulants[:, 0]

    @property
    def variance_change(self) -> np.ndarray:
        return self.cumulants[:, 1]

    @property
    def shifts(self) -> Optional[np.ndarray]:
        return None if self.window is None else np.arange(-self.window, self.window + 1)

    def check_invariants(self, tolerance: float = 1e-8) -> List[str]:
        violations = []
        if self.quasiprobabilities is not None:
            defect = float(np.max(np.abs(self.quasiprobabilities.sum(axis=-1) - 1.0)))
            if defect > tolerance:
                violations.append(f"sum q = 1 (defect {defect:.3e})")
        if self.distributions is not None:
            defect = float(np.max(np.abs(self.distributions.sum(axis=-1) - 1.0)))
            if defect > tolerance:
                violations.append(f"sum p = 1 (defect {defect:.3e})")
            if float(self.distributions.min()) < -tolerance:
                violations.append(f"p >= 0 (min {self.distributions.min():.3e})")
        return violations

    def __repr__(self):
        return f"<PhotonStatistics mode={self.mode} times={self.times.size} window={self.window}>"
