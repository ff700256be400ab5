"""Remote Entanglement Protocol Domain Entity"""
import math
from typing import Dict, Optional, Tuple

import numpy as np

from prft.domain.exceptions import ProtocolConfigurationError


class ProtocolState:
    """
    Protocol State Domain Entity

    Branch bookkeeping of the heralded remote-entanglement protocol. Alice
    and Bob each hold a collective superposition of |++..> and |--..>; the
    four joint branches displace the intensity-difference signal by
    -separation, 0, 0, +separation. A sample inside the acceptance window
    heralds the zero-displacement branches.

    Business Rules:
    - branch probabilities are normalized
    - every peak width is at least the initial width
    """

    BRANCHES: Tuple[Tuple[str, str], ...] = (("+", "+"), ("+", "-"), ("-", "+"), ("-", "-"))

    def __init__(
        self,
        alice=(1.0, 1.0),
        bob=(1.0, 1.0),
        *,
        separation: float,
        initial_width: float,
        broadening: float = 0.0,
    ):
        """
        Args:
            alice: Amplitudes of Alice's (|++..>, |--..>) components
            bob: Amplitudes of Bob's (|++..>, |--..>) components
            separation: Peak displacement of the outer branches (photons)
            initial_width: Photon-number width before transmission
            broadening: Extra width from loss and amplification

        Raises:
            ProtocolConfigurationError: Unnormalizable amplitudes or negative widths
        """
        self.alice = self._normalize(alice, "Alice")
        self.bob = self._normalize(bob, "Bob")
        self.separation = self._validate_nonnegative(separation, "peak separation")
        self.initial_width = self._validate_nonnegative(initial_width, "initial width")
        self.broadening = self._validate_nonnegative(broadening, "broadening")
        self.record: Dict[str, int] = {"trials": 0, "heralded": 0}

    @staticmethod
    def _normalize(amplitudes, party: str) -> np.ndarray:
        vector = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vector)
        if vector.size != 2 or norm == 0:
            raise ProtocolConfigurationError(f"{party} needs two non-vanishing branch amplitudes")
        return vector / norm

    @staticmethod
    def _validate_nonnegative(value: float, name: str) -> float:
        value = float(value)
        if not math.isfinite(value) or value < 0:
            raise ProtocolConfigurationError(f"{name} must be >= 0, got {value}")
        return value

    @property
    def branch_probabilities(self) -> np.ndarray:
        a = np.abs(self.alice) ** 2
        b = np.abs(self.bob) ** 2
        return np.array([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])

    @property
    def peak_positions(self) -> np.ndarray:
        s = self.separation
        return np.array([-s, 0.0, 0.0, s])

    @property
    def peak_width(self) -> float:
        return math.sqrt(self.initial_width ** 2 + self.broadening ** 2)

    def heralding_branches(self) -> np.ndarray:
        return self.peak_positions == 0.0

    def register(self, trials: int, heralded: int, branch_counts: Optional[np.ndarray] = None):
        self.record["trials"] += int(trials)
        self.record["heralded"] += int(heralded)
        if branch_counts is not None:
            for (a, b), count in zip(self.BRANCHES, branch_counts):
                key = f"branch_{a}{b}"
                self.record[key] = self.record.get(key, 0) + int(count)

    def __repr__(self):
        return (
            f"<ProtocolState separation={self.separation} width={self.peak_width} "
            f"trials={self.record['trials']}>"
        )
