"""Physical Units Domain Entity"""
import math
from typing import Optional

from prft.domain.exceptions import InvalidSystemError

HBAR = 1.054571817e-34
EPSILON_0 = 8.8541878128e-12


class PhysicalUnits:
    """
    Physical Units Domain Entity

    SI inputs of the application formulas. Every supplied quantity must be
    positive; missing ones stay None and are requested by the formula that
    needs them.

    Frequency conventions for the photon frequency:
    - "cycles": the given value is nu in Hz and omega = 2 pi nu
    - "literal": the given value already is omega in rad/s
    The Rabi frequency is always taken as angular (rad/s).
    """

    VALID_CONVENTIONS = {"cycles", "literal"}

    def __init__(
        self,
        *,
        photon_frequency: Optional[float] = None,
        rabi_frequency: Optional[float] = None,
        power: Optional[float] = None,
        field: Optional[float] = None,
        volume: Optional[float] = None,
        loss_rate: Optional[float] = None,
        distance: Optional[float] = None,
        pulse_duration: Optional[float] = None,
        n_atoms: int = 1,
        convention: str = "cycles",
    ):
        """
        Args:
            photon_frequency: Photon frequency (Hz or rad/s, see convention)
            rabi_frequency: Rabi frequency Omega_R (rad/s)
            power: Transmitted power P (W)
            field: Electric field amplitude E (V/m)
            volume: Mode volume V (m^3)
            loss_rate: Fiber loss rate gamma (1/km)
            distance: Fiber length d (km)
            pulse_duration: Pulse duration t_p (s)
            n_atoms: Atoms per ensemble N_A
            convention: "cycles" or "literal"

        Raises:
            InvalidSystemError: Non-positive quantity or unknown convention
        """
        self.photon_frequency = self._validate_positive(photon_frequency, "photon frequency")
        self.rabi_frequency = self._validate_positive(rabi_frequency, "Rabi frequency")
        self.power = self._validate_positive(power, "power")
        self.field = self._validate_positive(field, "field")
        self.volume = self._validate_positive(volume, "volume")
        self.loss_rate = self._validate_positive(loss_rate, "loss rate", allow_zero=True)
        self.distance = self._validate_positive(distance, "distance")
        self.pulse_duration = self._validate_positive(pulse_duration, "pulse duration")
        self.n_atoms = self._validate_atoms(n_atoms)
        self.convention = self._validate_convention(convention)

    @staticmethod
    def _validate_positive(value, name: str, allow_zero: bool = False) -> Optional[float]:
        if value is None:
            return None
        value = float(value)
        if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
            raise InvalidSystemError(f"{name} must be positive, got {value}")
        return value

    @staticmethod
    def _validate_atoms(n_atoms) -> int:
        if int(n_atoms) != n_atoms or n_atoms < 1:
            raise InvalidSystemError(f"atom count must be an integer >= 1, got {n_atoms}")
        return int(n_atoms)

    @staticmethod
    def _validate_convention(convention: str) -> str:
        if convention not in PhysicalUnits.VALID_CONVENTIONS:
            raise InvalidSystemError(f"unknown frequency convention '{convention}'")
        return convention

    @staticmethod
    def angular(frequency: float, convention: str) -> float:
        return 2.0 * math.pi * frequency if convention == "cycles" else frequency

    def require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise InvalidSystemError(f"missing physical quantities: {', '.join(missing)}")
        return tuple(getattr(self, name) for name in names)

    @property
    def angular_photon_frequency(self) -> float:
        (frequency,) = self.require("photon_frequency")
        return self.angular(frequency, self.convention)

    @property
    def photon_energy(self) -> float:
        """hbar omega in J."""
        return HBAR * self.angular_photon_frequency

    def with_convention(self, convention: str) -> "PhysicalUnits":
        return PhysicalUnits(
            photon_frequency=self.photon_frequency,
            rabi_frequency=self.rabi_frequency,
            power=self.power,
            field=self.field,
            volume=self.volume,
            loss_rate=self.loss_rate,
            distance=self.distance,
            pulse_duration=self.pulse_duration,
            n_atoms=self.n_atoms,
            convention=convention,
        )

    def __repr__(self):
        return (
            f"<PhysicalUnits nu={self.photon_frequency} Omega_R={self.rabi_frequency} "
            f"P={self.power} N_A={self.n_atoms} convention={self.convention}>"
        )
