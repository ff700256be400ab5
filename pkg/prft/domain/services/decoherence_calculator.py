"""Decoherence Calculator - Light-matter purity and quantum-optical coherence times"""
import math
from typing import Dict, Optional, Sequence, Union

import numpy as np

from prft.domain.entities import EPSILON_0, HBAR, PhysicalUnits, QuasienergyDerivatives
from prft.domain.exceptions import InvalidStateError, InvalidSystemError

Derivatives = Union[QuasienergyDerivatives, Sequence[float]]

PURITY_VARIANTS = {"overlap": 4.0, "printed": 2.0}


def _slopes(derivatives: Derivatives) -> np.ndarray:
    if isinstance(derivatives, QuasienergyDerivatives):
        return np.asarray(derivatives.first, dtype=float)
    return np.asarray(derivatives, dtype=float).reshape(-1)


def _largest_splitting(per_mode: Sequence[Derivatives]):
    """(mode, (mu1, mu2), |E'_mu1 - E'_mu2|) maximizing the derivative difference."""
    best = (None, None, 0.0)
    for mode, derivatives in enumerate(per_mode):
        slopes = _slopes(derivatives)
        if slopes.size < 2:
            raise InvalidStateError("coherence times need at least one pair of Floquet states")
        gaps = np.abs(slopes[:, None] - slopes[None, :])
        mu1, mu2 = np.unravel_index(np.argmax(gaps), gaps.shape)
        if gaps[mu1, mu2] > best[2]:
            best = (mode, (int(min(mu1, mu2)), int(max(mu1, mu2))), float(gaps[mu1, mu2]))
    return best


class DecoherenceCalculator:
    """
    Decoherence of the matter system through photon-number branching.

    Floquet states with different phase derivatives E' drag the photon
    distribution apart at rate |Delta E'|; once the branches separate by
    one standard deviation the matter superposition has decohered.
    """

    @staticmethod
    def purity_prediction(
        c1: complex,
        c2: complex,
        slope1: float,
        slope2: float,
        variance: float,
        t,
        variant: str = "overlap",
    ):
        """
        Purity of a two-Floquet-state superposition,

            P = (1 + (|c1|^2 - |c2|^2)^2) / 2 + 2 |c1 c2|^2 exp(-(E'_2 - E'_1)^2 t^2 / (k sigma^2)).

        The default variant "overlap" uses k = 4, the overlap of two Gaussian
        photon branches of variance sigma^2 whose centres separate by
        |E'_2 - E'_1| t. It differs from the single-mode closed form with
        2 sigma^2 in the denominator, which variant="printed" (k = 2)
        reproduces. When several modes carry which-path information, slopes
        and variances are given per mode and the exponents add up; two
        modes with opposite slopes under "overlap" equal one mode under
        "printed".

        Args:
            c1, c2: Floquet coefficients, |c1|^2 + |c2|^2 = 1
            slope1, slope2: E'_1, E'_2 (scalar or one entry per mode)
            variance: Initial photon-number variance sigma^2 (scalar or per mode)
            t: Time or array of times
            variant: "overlap" (k = 4, default) or "printed" (k = 2)

        Returns:
            Purity in (1/2, 1] (float or array like t)

        Raises:
            InvalidStateError: Unnormalized coefficients or sigma^2 <= 0
        """
        w1, w2 = abs(c1) ** 2, abs(c2) ** 2
        if abs(w1 + w2 - 1.0) > 1e-9:
            raise InvalidStateError(f"|c1|^2 + |c2|^2 = {w1 + w2!r}, expected 1")
        variance = np.atleast_1d(np.asarray(variance, dtype=float))
        if np.any(variance <= 0):
            raise InvalidStateError("photon-number variance must be positive")
        if variant not in PURITY_VARIANTS:
            raise InvalidStateError(f"unknown purity variant '{variant}'")
        splitting = np.atleast_1d(np.asarray(slope2, dtype=float) - np.asarray(slope1, dtype=float))
        if splitting.shape != variance.shape and variance.size != 1:
            raise InvalidStateError(f"{splitting.size} slope pairs for {variance.size} variances")
        rate = float(np.sum(splitting ** 2 / (PURITY_VARIANTS[variant] * variance)))
        t = np.asarray(t, dtype=float)
        exponent = rate * t ** 2
        result = 0.5 * (1.0 + (w1 - w2) ** 2) + 2.0 * w1 * w2 * np.exp(-exponent)
        return float(result) if result.ndim == 0 else result

    @staticmethod
    def mean_photons(field: float, volume: float, frequency: float, convention: str = "cycles") -> float:
        """n_bar = eps0 E^2 V / (2 hbar omega) of a closed cavity mode."""
        omega = PhysicalUnits.angular(frequency, convention)
        return EPSILON_0 * field ** 2 * volume / (2.0 * HBAR * omega)

    @staticmethod
    def coherence_time_closed(
        derivatives: Sequence[Derivatives],
        field: float,
        volume: float,
        frequencies: Sequence[float],
        convention: str = "cycles",
    ) -> Dict[str, object]:
        """
        t_c = min over (k, mu1, mu2) of sqrt(n_bar_k) / |E'_mu1(phi_k) - E'_mu2(phi_k)|.

        Args:
            derivatives: Per mode the E'_mu in rad/s (array or QuasienergyDerivatives)
            field: Electric field amplitude E (V/m)
            volume: Mode volume V (m^3)
            frequencies: Mode frequencies (see convention)

        Returns:
            Dict with "coherence_time" (s; +inf if every splitting is
            phase-insensitive), "mode", "pair" and "mean_photons"
        """
        if len(derivatives) != len(frequencies):
            raise InvalidSystemError("one frequency per mode is required")
        mean = [DecoherenceCalculator.mean_photons(field, volume, f, convention) for f in frequencies]
        best = {"coherence_time": math.inf, "mode": None, "pair": None, "mean_photons": None}
        for mode, per_mode in enumerate(derivatives):
            mode_, pair, gap = _largest_splitting([per_mode])
            if mode_ is None:
                continue
            t_c = math.sqrt(mean[mode]) / gap
            if t_c < best["coherence_time"]:
                best = {"coherence_time": t_c, "mode": mode, "pair": pair, "mean_photons": mean[mode]}
        return best

    @staticmethod
    def coherence_time_traveling(
        derivatives: Sequence[Derivatives],
        powers: Sequence[float],
        frequencies: Sequence[float],
        convention: str = "cycles",
    ) -> Dict[str, object]:
        """
        t_c = min over (k, mu1, mu2) of P(omega_k) / (hbar omega_k |E'_mu1 - E'_mu2|^2)
        for modes driven by traveling waves of power P.

        Example:
            DecoherenceCalculator.coherence_time_traveling([[0.0, 40e6]], [10e-6], [400e12])
            # ~24 ms with omega = 2 pi nu, ~0.15 s with omega = nu
        """
        if not len(derivatives) == len(powers) == len(frequencies):
            raise InvalidSystemError("one power and one frequency per mode are required")
        if any(p <= 0 for p in powers):
            raise InvalidSystemError("powers must be positive")
        best = {"coherence_time": math.inf, "mode": None, "pair": None}
        for mode, per_mode in enumerate(derivatives):
            mode_, pair, gap = _largest_splitting([per_mode])
            if mode_ is None:
                continue
            energy = HBAR * PhysicalUnits.angular(frequencies[mode], convention)
            t_c = powers[mode] / (energy * gap ** 2)
            if t_c < best["coherence_time"]:
                best = {"coherence_time": t_c, "mode": mode, "pair": pair}
        return best

    @staticmethod
    def coherence_report(
        units: PhysicalUnits,
        derivatives: Optional[Sequence[Derivatives]] = None,
    ) -> Dict[str, Dict[str, object]]:
        """
        Coherence times under both frequency conventions.

        Without derivatives the splitting is the Rabi frequency,
        E' in {0, Omega_R}. Closed-cavity times need field and volume,
        traveling-wave times need the power.
        """
        if derivatives is None:
            (rabi,) = units.require("rabi_frequency")
            derivatives = [[0.0, rabi]]
        (frequency,) = units.require("photon_frequency")
        frequencies = [frequency] * len(derivatives)
        report: Dict[str, Dict[str, object]] = {}
        for convention in sorted(PhysicalUnits.VALID_CONVENTIONS):
            entry: Dict[str, object] = {}
            if units.power is not None:
                entry["traveling"] = DecoherenceCalculator.coherence_time_traveling(
                    derivatives, [units.power] * len(derivatives), frequencies, convention
                )
            if units.field is not None and units.volume is not None:
                entry["closed"] = DecoherenceCalculator.coherence_time_closed(
                    derivatives, units.field, units.volume, frequencies, convention
                )
            if not entry:
                raise InvalidSystemError("coherence times need a power or a field and a volume")
            report[convention] = entry
        return report


purity_prediction = DecoherenceCalculator.purity_prediction
coherence_time_closed = DecoherenceCalculator.coherence_time_closed
coherence_time_traveling = DecoherenceCalculator.coherence_time_traveling
coherence_report = DecoherenceCalculator.coherence_report
