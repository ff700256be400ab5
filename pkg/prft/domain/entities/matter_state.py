"""Matter State Domain Entity"""
from typing import Optional

import numpy as np

from prft.domain.exceptions import InvalidStateError


class MatterState:
    """
    Matter State Domain Entity

    Normalized state vector of the d-level matter system. Index 0 is the
    spin-up state |up> (sigma_z = +1) for two-level systems.
    """

    VALID_BASES = {"spin-z", "floquet", "custom"}
    NORM_TOLERANCE = 1e-12

    def __init__(self, amplitudes, basis: str = "spin-z", label: Optional[str] = None):
        """
        Args:
            amplitudes: Complex amplitude vector of length d
            basis: Label of the basis the state was specified in
            label: Optional display name

        Raises:
            InvalidStateError: If the vector is not normalized
        """
        self.amplitudes = self._validate_amplitudes(amplitudes)
        self.basis = self._validate_basis(basis)
        self.label = label

    @staticmethod
    def _validate_amplitudes(amplitudes) -> np.ndarray:
        vector = np.array(amplitudes, dtype=complex).reshape(-1)
        if vector.size == 0 or not np.all(np.isfinite(vector)):
            raise InvalidStateError("matter state must be a finite non-empty vector")
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > MatterState.NORM_TOLERANCE:
            raise InvalidStateError(f"matter state norm is {norm!r}, expected 1")
        vector.setflags(write=False)
        return vector

    @staticmethod
    def _validate_basis(basis: str) -> str:
        if basis not in MatterState.VALID_BASES:
            raise InvalidStateError(f"unknown basis '{basis}'")
        return basis

    @classmethod
    def normalized(cls, amplitudes, basis: str = "spin-z", label: Optional[str] = None) -> "MatterState":
        vector = np.array(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(vector / norm, basis=basis, label=label)

    @classmethod
    def spin_up(cls) -> "MatterState":
        return cls([1.0, 0.0], label="up")

    @classmethod
    def spin_down(cls) -> "MatterState":
        return cls([0.0, 1.0], label="down")

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __repr__(self):
        return f"<MatterState d={self.dimension} basis={self.basis} label={self.label}>"
