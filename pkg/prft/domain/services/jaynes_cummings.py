"""Jaynes-Cummings Closed Forms - Analytic generalized propagators for equal-frequency JC drives"""
from typing import Sequence

import numpy as np

from prft.domain.entities import (
    CountingPoints,
    DrivenSystem,
    GeneralizedPropagatorSet,
    GeneratingFunctionSamples,
    MatterState,
)
from prft.domain.exceptions import InvalidGridError, InvalidSystemError
from prft.domain.services.model_factory import spin_half_operators

_OPS = spin_half_operators()


def frame_rotation(omega: float, times) -> np.ndarray:
    """U0(t) = exp(-i omega t sigma_z / 2), shape (T, 2, 2)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    rotation = np.zeros((times.size, 2, 2), dtype=complex)
    rotation[:, 0, 0] = np.exp(-0.5j * omega * times)
    rotation[:, 1, 1] = np.exp(0.5j * omega * times)
    return rotation


def to_schrodinger_picture(rotating, omega: float, times) -> np.ndarray:
    """U_S(t) = U0(t) U_rot(t); the time axis is the second-to-last matrix axis batch."""
    return frame_rotation(omega, times) @ np.asarray(rotating, dtype=complex)


def to_rotating_picture(schrodinger, omega: float, times) -> np.ndarray:
    rotation = frame_rotation(omega, times)
    return np.conj(np.swapaxes(rotation, -1, -2)) @ np.asarray(schrodinger, dtype=complex)


class JaynesCummingsParameters:
    """
    Equal-frequency Jaynes-Cummings drive: h_z, omega and per mode the
    effective coupling g_k and phase phi_k.
    """

    def __init__(self, h_z: float, omega: float, couplings: Sequence[float], phases: Sequence[float]):
        self.h_z = float(h_z)
        self.omega = float(omega)
        self.couplings = np.asarray(couplings, dtype=float)
        self.phases = np.asarray(phases, dtype=float)
        if self.couplings.shape != self.phases.shape or self.couplings.ndim != 1:
            raise InvalidSystemError("one phase per coupling is required")

    @classmethod
    def from_system(cls, system: DrivenSystem) -> "JaynesCummingsParameters":
        """
        Raises:
            InvalidSystemError: If the system is not an equal-frequency JC drive
        """
        ops = _OPS
        if system.dimension != 2 or not system.rotating_wave:
            raise InvalidSystemError("closed form needs a two-level rotating-wave system")
        if not all(np.allclose(op, ops["+"]) for op in system.operators):
            raise InvalidSystemError("closed form needs sigma_+ couplings on every mode")
        if not np.allclose(system.frequencies, system.frequencies[0]):
            raise InvalidSystemError("closed form needs equal mode frequencies")
        h0 = system.h0
        if abs(h0[0, 1]) > 1e-12 or abs(h0[0, 0] + h0[1, 1]) > 1e-12:
            raise InvalidSystemError("closed form needs H0 = h_z sigma_z / 2")
        return cls(2.0 * h0[0, 0].real, system.frequencies[0], system.couplings, system.phases)

    @property
    def detuning(self) -> float:
        return self.h_z - self.omega

    def collective_coupling(self, chi) -> np.ndarray:
        """G = sum_k g_k exp(-i (phi_k + chi_k)) for fields (P, K)."""
        chi = np.atleast_2d(np.asarray(chi, dtype=float))
        return np.sum(self.couplings * np.exp(-1j * (self.phases + chi)), axis=-1)

    def quasienergy(self, chi) -> np.ndarray:
        """E = sqrt(Delta^2 + 16 |G|^2) / 2 in the rotating frame."""
        coupling = np.abs(self.collective_coupling(chi))
        return 0.5 * np.sqrt(self.detuning ** 2 + 16.0 * coupling ** 2)

    def __repr__(self):
        return f"<JaynesCummingsParameters h_z={self.h_z} omega={self.omega} g={self.couplings.tolist()}>"


def rotating_frame_axis(params: JaynesCummingsParameters, chi):
    """
    (E, sigma_n) with H_rot = E sigma_n for fields (P, K).

    sigma_n = cos theta sigma_z + sin theta (cos beta sigma_x + sin beta sigma_y),
    cos theta = Delta / 2E, sin theta = 2|G| / E, G = |G| e^{-i beta}.
    """
    coupling = params.collective_coupling(chi)
    energy = params.quasienergy(chi)
    safe = np.where(energy > 0, energy, 1.0)
    cos_theta = np.where(energy > 0, params.detuning / (2.0 * safe), 1.0)
    sin_theta = np.where(energy > 0, 2.0 * np.abs(coupling) / safe, 0.0)
    beta = -np.angle(coupling)
    axis = (
        cos_theta[:, None, None] * _OPS["z"]
        + (sin_theta * np.cos(beta))[:, None, None] * _OPS["x"]
        + (sin_theta * np.sin(beta))[:, None, None] * _OPS["y"]
    )
    return energy, axis


def jc_propagators(params: JaynesCummingsParameters, chi, times, picture: str = "rotating") -> np.ndarray:
    """
    Closed-form generalized propagators, shape (P, T, 2, 2).

    U_rot(t) = cos(E t) 1 - i sin(E t) sigma_n; the Schrodinger picture adds
    the frame rotation U0(t) on the left.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    energy, axis = rotating_frame_axis(params, chi)
    phase = np.outer(energy, times)
    rotating = (
        np.cos(phase)[:, :, None, None] * np.eye(2)
        - 1j * np.sin(phase)[:, :, None, None] * axis[:, None, :, :]
    )
    if picture == "rotating":
        return rotating
    if picture == "schrodinger":
        return to_schrodinger_picture(rotating, params.omega, times)
    raise InvalidGridError(f"unknown picture '{picture}'")


def jc_propagator(h_z: float, omega: float, g: float, chi: float, phi: float, t: float,
                  picture: str = "rotating") -> np.ndarray:
    """Single-mode closed form at counting field chi (enters as chi + phi)."""
    params = JaynesCummingsParameters(h_z, omega, [g], [phi])
    return jc_propagators(params, [[chi]], [t], picture)[0, 0]


def two_mode_jc_propagator(h_z: float, omega: float, g1: float, g2: float, chi1: float, chi2: float,
                           phi1: float, phi2: float, t: float, picture: str = "rotating") -> np.ndarray:
    params = JaynesCummingsParameters(h_z, omega, [g1, g2], [phi1, phi2])
    return jc_propagators(params, [[chi1, chi2]], [t], picture)[0, 0]


class TwoModeJCPropagator:
    """
    Closed-form back end producing the same GeneralizedPropagatorSet as the
    numeric integrator for equal-frequency Jaynes-Cummings drives.
    """

    def __init__(self, params: JaynesCummingsParameters, picture: str = "schrodinger"):
        self.params = params
        self.picture = picture

    @classmethod
    def from_system(cls, system: DrivenSystem, picture: str = "schrodinger") -> "TwoModeJCPropagator":
        return cls(JaynesCummingsParameters.from_system(system), picture)

    def propagate(self, points: CountingPoints, times: Sequence[float]) -> GeneralizedPropagatorSet:
        fields = points.field_vectors(self.params.couplings.size)
        matrices = jc_propagators(self.params, fields, times, self.picture)
        return GeneralizedPropagatorSet(
            points,
            times,
            matrices,
            self.params.phases,
            picture=self.picture,
            frame_frequency=self.params.omega if self.picture == "rotating" else None,
        )


def two_mode_jc_mgf_closed_form(
    params: JaynesCummingsParameters,
    state: MatterState,
    points: CountingPoints,
    times: Sequence[float],
    variant: str = "exact",
) -> GeneratingFunctionSamples:
    """
    Closed-form dynamical moment-generating function of a JC drive.

    "exact" evaluates (1/2) <U_phi^+ U_{phi+chi} + U_{phi-chi}^+ U_phi> with the
    closed-form propagators. "approximate" drops the counting field from the
    precession axis, leaving

        M = sum_mu |c_mu|^2 / 2 (e^{i s_mu (E_phi - E_{phi+chi}) t} + e^{i s_mu (E_{phi-chi} - E_phi) t}),

    with s_mu = +-1 the sign of the Floquet state along sigma_n(phi).

    Raises:
        InvalidGridError: Unknown variant
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    fields = points.field_vectors(params.couplings.size)
    zero = points.zero_index
    psi = np.asarray(state.amplitudes, dtype=complex)

    if variant == "exact":
        propagators = jc_propagators(params, fields, times)
        evolved = propagators @ psi
        reference = evolved[zero]
        mirrored = evolved[points.negated_indices]
        values = 0.5 * (
            np.einsum("ti,pti->tp", reference.conj(), evolved)
            + np.einsum("pti,ti->tp", mirrored.conj(), reference)
        )
        return GeneratingFunctionSamples(points, times, values, kind="closed-form")

    if variant == "approximate":
        energy, axis = rotating_frame_axis(params, fields)
        eigenvalues, eigenvectors = np.linalg.eigh(axis[zero])
        weights = np.abs(eigenvectors.conj().T @ psi) ** 2
        signs = np.sign(eigenvalues)
        mirrored = energy[points.negated_indices]
        forward = np.exp(1j * np.einsum("m,p,t->mtp", signs, energy[zero] - energy, times))
        backward = np.exp(1j * np.einsum("m,p,t->mtp", signs, mirrored - energy[zero], times))
        values = 0.5 * np.einsum("m,mtp->tp", weights, forward + backward)
        return GeneratingFunctionSamples(points, times, values, kind="closed-form")

    raise InvalidGridError(f"unknown closed-form variant '{variant}'")


def flux_closed_form(params: JaynesCummingsParameters, mode: int) -> np.ndarray:
    """
    dE/dphi_k of the rotating-frame eigenstates with energies (-E, +E).

    dE/dpsi_k = 2 (d|G|^2/dpsi_k) / E; for two modes this is
    -4 g1 g2 sin(psi_1 - psi_2) / E on mode 1.
    """
    coupling = params.collective_coupling(np.zeros((1, params.couplings.size)))[0]
    energy = float(params.quasienergy(np.zeros((1, params.couplings.size)))[0])
    psi_k = params.phases[mode]
    # d|G|^2/dpsi_k = 2 Re(G* dG/dpsi_k), dG/dpsi_k = -i g_k e^{-i psi_k}
    derivative_abs2 = 2.0 * np.real(np.conj(coupling) * (-1j) * params.couplings[mode] * np.exp(-1j * psi_k))
    d_energy = 2.0 * derivative_abs2 / energy if energy > 0 else 0.0
    return np.array([-d_energy, d_energy])


__all__ = [
    "JaynesCummingsParameters",
    "TwoModeJCPropagator",
    "frame_rotation",
    "flux_closed_form",
    "jc_propagator",
    "jc_propagators",
    "rotating_frame_axis",
    "to_rotating_picture",
    "to_schrodinger_picture",
    "two_mode_jc_mgf_closed_form",
    "two_mode_jc_propagator",
]
