"""Model Factory - Builds the driven systems and matter states used across the toolkit"""
from functools import reduce
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from prft.domain.entities import DrivenSystem, MatterState, ModeSpec
from prft.domain.exceptions import InvalidStateError, InvalidSystemError


def spin_half_operators() -> Dict[str, np.ndarray]:
    """
    Pauli matrices and ladder operators with sigma_pm = sigma_x +- i sigma_y.

    Basis order is (|up>, |down>), so sigma_z |up> = +|up> and
    sigma_+ = [[0, 2], [0, 0]].

    Returns:
        Dict with keys "x", "y", "z", "+", "-"
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return {"x": sx, "y": sy, "z": sz, "+": sx + 1j * sy, "-": sx - 1j * sy}


def build_driven_system(
    h0,
    couplings: Iterable[Tuple[np.ndarray, ModeSpec]],
    *,
    rotating_wave: bool = False,
    require_period: bool = True,
) -> DrivenSystem:
    """
    Validated DrivenSystem from H0 and (A_k, ModeSpec) pairs.

    Raises:
        InvalidSystemError: Dimension mismatch or non-Hermitian matrix (named)
        CommensurabilityError: Incommensurate frequencies with require_period
    """
    couplings = list(couplings)
    operators = [operator for operator, _ in couplings]
    modes = [mode for _, mode in couplings]
    return DrivenSystem(h0, operators, modes, rotating_wave=rotating_wave, require_period=require_period)


class ModelFactory:
    """
    Standard light-matter models in units of the matter splitting h_z.

    Pure construction, no numerics beyond matrix algebra.
    """

    @staticmethod
    def rabi_system(h_z: float, omega: float, coupling: float, phase: float = 0.0,
                    amplitude: Optional[float] = None) -> DrivenSystem:
        """
        Semiclassical Rabi model H = h_z/2 sigma_z + 2 g sigma_x cos(omega t + phi).

        Example:
            ModelFactory.rabi_system(1.0, 10.0, 10.0).period  # 2 pi / 10
        """
        ops = spin_half_operators()
        mode = ModeSpec(omega, coupling=coupling, amplitude=amplitude, phase=phase)
        return build_driven_system(0.5 * h_z * ops["z"], [(ops["x"], mode)])

    @staticmethod
    def jaynes_cummings_system(h_z: float, omega: float, coupling: float, phase: float = 0.0,
                               amplitude: Optional[float] = None) -> DrivenSystem:
        ops = spin_half_operators()
        mode = ModeSpec(omega, coupling=coupling, amplitude=amplitude, phase=phase)
        return build_driven_system(0.5 * h_z * ops["z"], [(ops["+"], mode)], rotating_wave=True)

    @staticmethod
    def two_mode_jc_system(h_z: float, omega: float, couplings: Sequence[float],
                           phases: Sequence[float], amplitudes: Optional[Sequence[float]] = None) -> DrivenSystem:
        """Two Jaynes-Cummings modes at a common frequency."""
        ops = spin_half_operators()
        amplitudes = amplitudes or [None] * len(couplings)
        modes = [
            ModeSpec(omega, coupling=g, amplitude=alpha, phase=phi, label=f"mode{k + 1}")
            for k, (g, phi, alpha) in enumerate(zip(couplings, phases, amplitudes))
        ]
        return build_driven_system(0.5 * h_z * ops["z"], [(ops["+"], mode) for mode in modes], rotating_wave=True)

    @staticmethod
    def multi_mode_rabi_system(h_z: float, frequencies: Sequence[float], couplings: Sequence[float],
                               phases: Optional[Sequence[float]] = None) -> DrivenSystem:
        """Rabi coupling sigma_x to every mode, e.g. the three-mode omega, 2 omega, 3 omega drive."""
        ops = spin_half_operators()
        phases = phases if phases is not None else [0.0] * len(frequencies)
        if not len(frequencies) == len(couplings) == len(phases):
            raise InvalidSystemError("frequencies, couplings and phases must have equal length")
        modes = [
            ModeSpec(w, coupling=g, phase=phi, label=f"mode{k + 1}")
            for k, (w, g, phi) in enumerate(zip(frequencies, couplings, phases))
        ]
        return build_driven_system(0.5 * h_z * ops["z"], [(ops["x"], mode) for mode in modes])

    @staticmethod
    def ensemble_system(system: DrivenSystem, n_atoms: int) -> DrivenSystem:
        """
        N_A identical, non-interacting copies of a matter system driven by the
        same modes: H0 and every A_k become collective sums over atoms.

        Raises:
            InvalidSystemError: If d^N_A exceeds the supported dimension
        """
        if n_atoms < 1:
            raise InvalidSystemError("an ensemble needs at least one atom")
        d = system.dimension
        if d ** n_atoms > DrivenSystem.MAX_DIMENSION:
            raise InvalidSystemError(
                f"ensemble dimension {d}^{n_atoms} exceeds {DrivenSystem.MAX_DIMENSION}"
            )
        h0 = collective_operator(system.h0, n_atoms)
        operators = [collective_operator(op, n_atoms) for op in system.operators]
        return DrivenSystem(
            h0,
            operators,
            system.modes,
            rotating_wave=system.rotating_wave,
            require_period=system.period is not None,
        )

    @staticmethod
    def hadamard_rotation(n_atoms: int = 1) -> np.ndarray:
        """exp(-i pi sigma_y / 4) on every atom."""
        sy = spin_half_operators()["y"]
        single = np.cos(np.pi / 4) * np.eye(2) - 1j * np.sin(np.pi / 4) * sy
        return reduce(np.kron, [single] * n_atoms)

    @staticmethod
    def ghz_state(n_atoms: int, relative_phase: float = 0.0) -> MatterState:
        """(|up..up> + e^{i theta} |down..down>) / sqrt 2."""
        if n_atoms < 1:
            raise InvalidStateError("a GHZ state needs at least one atom")
        vector = np.zeros(2 ** n_atoms, dtype=complex)
        vector[0] = 1.0
        vector[-1] = np.exp(1j * relative_phase)
        return MatterState.normalized(vector, label=f"GHZ{n_atoms}")

    @staticmethod
    def collective_floquet_state(single_atom_states, labels: Sequence[int]) -> MatterState:
        """
        Product of single-atom Floquet states |u_{mu_1}> x ... x |u_{mu_N}>.

        Args:
            single_atom_states: (d, d) matrix whose columns are |u_mu>
            labels: Floquet label per atom
        """
        states = np.asarray(single_atom_states, dtype=complex)
        vectors = [states[:, mu] for mu in labels]
        return MatterState.normalized(reduce(np.kron, vectors), basis="floquet",
                                      label="".join(str(mu) for mu in labels))


def collective_operator(operator, n_atoms: int) -> np.ndarray:
    """sum_i 1 x .. x O_i x .. x 1 over n_atoms copies."""
    operator = np.asarray(operator, dtype=complex)
    d = operator.shape[0]
    total = np.zeros((d ** n_atoms, d ** n_atoms), dtype=complex)
    for site in range(n_atoms):
        factors = [np.eye(d)] * n_atoms
        factors[site] = operator
        total += reduce(np.kron, factors)
    return total


rabi_system = ModelFactory.rabi_system
jaynes_cummings_system = ModelFactory.jaynes_cummings_system
two_mode_jc_system = ModelFactory.two_mode_jc_system
multi_mode_rabi_system = ModelFactory.multi_mode_rabi_system
ensemble_system = ModelFactory.ensemble_system
hadamard_rotation = ModelFactory.hadamard_rotation
ghz_state = ModelFactory.ghz_state
collective_floquet_state = ModelFactory.collective_floquet_state
