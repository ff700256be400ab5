"""Counting Statistics - Generating functions, cumulants, quasiprobabilities and redistribution"""
import logging
import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from prft.domain.entities import (
    CountingGrid,
    CountingPoints,
    CountingStencil,
    DrivenSystem,
    FloquetSolution,
    GeneralizedPropagatorSet,
    GeneratingFunctionSamples,
    MatterState,
    QuasienergyDerivatives,
)
from prft.domain.exceptions import (
    CoverageError,
    InvalidGridError,
    NegativeProbabilityError,
    WindowError,
)
from prft.domain.services.jaynes_cummings import to_schrodinger_picture

logger = logging.getLogger(__name__)

STENCIL_OFFSETS = np.arange(-4, 5)
ALIASING_TOLERANCE = 1e-8
NEGATIVITY_TOLERANCE = 1e-8


def central_difference_weights(order: int, offsets: np.ndarray = STENCIL_OFFSETS) -> np.ndarray:
    """Finite-difference weights w with f^(order)(0) ~ sum_j w_j f(j h) / h^order."""
    powers = np.vander(offsets.astype(float), offsets.size, increasing=True).T
    rhs = np.zeros(offsets.size)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(powers, rhs)


_WEIGHTS = {order: central_difference_weights(order) for order in range(1, 5)}
# truncation order of the 9-point central stencil per derivative order
_ERROR_ORDER = {1: 8, 2: 8, 3: 6, 4: 6}


def _check_phases(propset: GeneralizedPropagatorSet, phases: Optional[Sequence[float]]):
    if phases is None:
        return
    phases = np.mod(np.asarray(phases, dtype=float), 2.0 * math.pi)
    stored = np.mod(propset.phases, 2.0 * math.pi)
    gap = np.abs(phases - stored)
    if np.any(np.minimum(gap, 2.0 * math.pi - gap) > 1e-12):
        raise CoverageError(
            f"propagators were computed at drive phases {stored.tolist()}, not {phases.tolist()}"
        )


def _evolved_states(propset: GeneralizedPropagatorSet, state: MatterState, times) -> Tuple[np.ndarray, np.ndarray]:
    if state.dimension != propset.dimension:
        raise CoverageError("matter state and propagators differ in dimension")
    times = propset.times if times is None else np.atleast_1d(np.asarray(times, dtype=float))
    indices = [propset.time_index(t) for t in times]
    return times, propset.matrices[:, indices] @ state.amplitudes


class CountingStatistics:
    """
    Full-counting statistics from generalized propagators.

    Every function is pure; samples and propagators are never mutated.
    """

    @staticmethod
    def dynamical_mgf(
        propset: GeneralizedPropagatorSet,
        state: MatterState,
        phases: Optional[Sequence[float]] = None,
        times: Optional[Sequence[float]] = None,
    ) -> GeneratingFunctionSamples:
        """
        Two-point tomographic generating function

            M_dy(chi, t) = (1/2) <U_phi^+ U_{phi+chi} + U_{phi-chi}^+ U_phi>.

        Args:
            propset: Propagators at phi + chi_j (grid or stencil)
            state: Initial matter state
            phases: Expected drive phases phi (checked against the set)
            times: Subset of stored times (default: all)

        Raises:
            CoverageError: Propagators missing for the requested phases or times
        """
        _check_phases(propset, phases)
        times, evolved = _evolved_states(propset, state, times)
        points = propset.points
        reference = evolved[points.zero_index]
        mirrored = evolved[points.negated_indices]
        values = 0.5 * (
            np.einsum("ti,pti->tp", reference.conj(), evolved)
            + np.einsum("pti,ti->tp", mirrored.conj(), reference)
        )
        return GeneratingFunctionSamples(points, times, values, kind="exact-expectation")

    @staticmethod
    def standard_fcs_mgf(
        propset: GeneralizedPropagatorSet,
        state: MatterState,
        phases: Optional[Sequence[float]] = None,
        times: Optional[Sequence[float]] = None,
    ) -> GeneratingFunctionSamples:
        """
        Projective-measurement surrogate M~(chi) = <U_{phi-chi/2}^+ U_{phi+chi/2}>.

        The propagators must be sampled at the half fields: a grid of 2N points
        yields the N-point grid, a stencil with step h yields step 2h (see
        `standard_fcs_points`).
        """
        _check_phases(propset, phases)
        times, evolved = _evolved_states(propset, state, times)
        output, plus, minus = _halved_field_pairs(propset.points)
        values = np.einsum("pti,pti->tp", evolved[minus].conj(), evolved[plus])
        return GeneratingFunctionSamples(output, times, values, kind="standard-fcs")

    @staticmethod
    def complex_cumulants(samples: GeneratingFunctionSamples, orders: Sequence[int] = (1, 2, 3, 4)) -> np.ndarray:
        """
        kappa_n = d^n K / d(i chi)^n at chi = 0 for every time, shape (T, len(orders)).

        On a CountingGrid: 9-point central differences at the grid spacing.
        On a CountingStencil (half width >= 8): 9-point differences at steps
        2h and h combined by Richardson extrapolation.

        Raises:
            InvalidGridError: Order outside 1..4 or stencil too small
            BranchError: Log of M not continuable around chi = 0
        """
        orders = list(orders)
        if any(order not in _WEIGHTS for order in orders):
            raise InvalidGridError("cumulants are available for orders 1..4 only")
        points = samples.points
        log_values = samples.unwrapped_log(radius=8 if isinstance(points, CountingStencil) else 4)
        zero = points.zero_index

        if isinstance(points, CountingGrid):
            indices = (zero + STENCIL_OFFSETS) % points.size
            stencil_values = log_values[:, indices]
            result = [
                (-1j) ** order * stencil_values @ _WEIGHTS[order] / points.spacing ** order
                for order in orders
            ]
            return np.stack(result, axis=1)

        if isinstance(points, CountingStencil) and points.half_width >= 8:
            fine = log_values[:, zero + STENCIL_OFFSETS]
            coarse = log_values[:, zero + 2 * STENCIL_OFFSETS]
            h = points.step
            result = []
            for order in orders:
                d_fine = fine @ _WEIGHTS[order] / h ** order
                d_coarse = coarse @ _WEIGHTS[order] / (2.0 * h) ** order
                factor = 2.0 ** _ERROR_ORDER[order]
                result.append((-1j) ** order * (factor * d_fine - d_coarse) / (factor - 1.0))
            return np.stack(result, axis=1)

        raise InvalidGridError("cumulants need a counting grid or a stencil of half width >= 8")

    @staticmethod
    def cumulants(samples: GeneratingFunctionSamples, orders: Sequence[int] = (1, 2, 3, 4)) -> np.ndarray:
        """Real dynamical cumulants, shape (T, len(orders)); see complex_cumulants."""
        estimates = CountingStatistics.complex_cumulants(samples, orders)
        residue = np.abs(estimates.imag)
        scale = np.maximum(1.0, np.abs(estimates.real))
        if np.any(residue > 1e-8 * scale):
            logger.warning("cumulants carry an imaginary residue up to %.3e", float(residue.max()))
        if samples.kind == "floquet-asymptotic" and any(order >= 3 for order in orders):
            logger.warning("third and fourth cumulants of the asymptotic generating function are not reliable")
        return estimates.real

    @staticmethod
    def quasiprobabilities(samples: GeneratingFunctionSamples, window: int) -> np.ndarray:
        """
        q_dn = (1/N) sum_j M(chi_j) e^{-i dn chi_j} for dn in [-W, W], shape (T, 2W + 1).

        Raises:
            InvalidGridError: Samples not on a uniform grid
            WindowError: N < 2W + 2, or weight outside the window above 1e-8
        """
        points = samples.points
        if not isinstance(points, CountingGrid):
            raise InvalidGridError("quasiprobabilities need a uniform counting grid")
        points.check_window(window)
        spectrum = np.fft.fft(samples.values, axis=1) / points.size
        shifts = np.arange(-window, window + 1)
        inside = spectrum[:, shifts % points.size]
        outside_mask = np.ones(points.size, dtype=bool)
        outside_mask[shifts % points.size] = False
        if np.any(outside_mask):
            leaked = float(np.max(np.abs(spectrum[:, outside_mask])))
            if leaked > ALIASING_TOLERANCE:
                raise WindowError(
                    f"quasiprobability weight {leaked:.3e} outside |dn| <= {window}; enlarge the window or grid"
                )
        residue = float(np.max(np.abs(inside.imag)))
        if residue > 1e-10:
            logger.warning("quasiprobabilities carry an imaginary residue of %.3e", residue)
        return inside.real

    @staticmethod
    def redistribute(
        quasiprobabilities: np.ndarray,
        initial_n: Sequence[int],
        initial_p: Sequence[float],
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        p_n(t) = sum_dn q_dn p_{n-dn}(t0) as a discrete convolution.

        Args:
            quasiprobabilities: q over dn in [-W, W], shape (2W + 1,) or (T, 2W + 1)
            initial_n: Consecutive photon numbers of p(t0)
            initial_p: p(t0)

        Returns:
            (n_values, p) with p of shape (len(n_values),) or (T, len(n_values))

        Raises:
            NegativeProbabilityError: p below -1e-8 (never clipped)
        """
        q = np.atleast_2d(np.asarray(quasiprobabilities, dtype=float))
        window = (q.shape[1] - 1) // 2
        initial_n = np.asarray(initial_n, dtype=int)
        initial_p = np.asarray(initial_p, dtype=float)
        if initial_n.shape != initial_p.shape or np.any(np.diff(initial_n) != 1):
            raise InvalidGridError("initial distribution needs consecutive photon numbers")
        n_values = np.arange(initial_n[0] - window, initial_n[-1] + window + 1)
        distributions = np.stack([np.convolve(initial_p, row) for row in q])
        minimum = float(distributions.min())
        if minimum < -NEGATIVITY_TOLERANCE:
            raise NegativeProbabilityError(
                f"redistributed probability reaches {minimum:.3e}; the quasiprobability window is too "
                "small or the semiclassical assumptions fail"
            )
        if np.asarray(quasiprobabilities).ndim == 1:
            distributions = distributions[0]
        return n_values, distributions

    @staticmethod
    def asymptotic_statistics(
        solution: FloquetSolution,
        derivatives: QuasienergyDerivatives,
        coefficients: Sequence[complex],
        times: Sequence[float],
    ) -> Dict[str, object]:
        """
        Floquet-asymptotic generating function and moments,

            M(chi) = sum_mu |c_mu|^2 / 2 (e^{i (E_mu(0) - E_mu(chi)) t} + e^{i (E_mu(-chi) - E_mu(0)) t}),
            d<N> = -sum_mu |c_mu|^2 E'_mu t,
            d sigma^2 = t^2 Var_w(E'),

        with E_mu(chi) the continued quasienergies of the solution.

        Returns:
            Dict with "samples", "mean_change" (T,), "variance_change" (T,) and
            "mean_change_per_state" (d, T)
        """
        times = np.atleast_1d(np.asarray(times, dtype=float))
        weights = np.abs(np.asarray(coefficients, dtype=complex)) ** 2
        points = solution.points
        energies = solution.quasienergies
        zero = energies[points.zero_index]
        mirrored = energies[points.negated_indices]
        forward = np.exp(1j * np.einsum("pm,t->tpm", zero[None, :] - energies, times))
        backward = np.exp(1j * np.einsum("pm,t->tpm", mirrored - zero[None, :], times))
        values = 0.5 * np.einsum("m,tpm->tp", weights, forward + backward)

        slopes = derivatives.first
        mean_slope = float(np.sum(weights * slopes))
        spread = float(np.sum(weights * slopes ** 2) - mean_slope ** 2)
        return {
            "samples": GeneratingFunctionSamples(points, times, values, kind="floquet-asymptotic"),
            "mean_change": -mean_slope * times,
            "variance_change": max(spread, 0.0) * times ** 2,
            "mean_change_per_state": -np.outer(slopes, times),
        }

    @staticmethod
    def energy_current(system: DrivenSystem, propset: GeneralizedPropagatorSet, state: MatterState) -> np.ndarray:
        """
        <dH/dt>(t) under the physical propagator, shape (T,).

        For a single counted mode omega d kappa_1/dt = -<dH/dt>.
        """
        physical = propset.at_zero_field()
        if propset.picture == "rotating":
            physical = to_schrodinger_picture(physical, propset.frame_frequency, propset.times)
        evolved = physical @ state.amplitudes
        zero_field = np.zeros((1, system.n_modes))
        values = np.empty(propset.times.size)
        for index, t in enumerate(propset.times):
            derivative = system.hamiltonian_time_derivative(t, zero_field)[0]
            values[index] = np.vdot(evolved[index], derivative @ evolved[index]).real
        return values


def _halved_field_pairs(points: CountingPoints):
    """(output points, indices of +chi/2, indices of -chi/2) for the surrogate."""
    if isinstance(points, CountingGrid):
        if points.size < 4:
            raise InvalidGridError("standard FCS needs a grid of at least 4 points")
        output = CountingGrid(points.size // 2, mode=points.mode)
        plus = np.arange(output.size)
        minus = (-plus) % points.size
        return output, plus, minus
    if isinstance(points, CountingStencil):
        output = CountingStencil(step=2.0 * points.step, half_width=points.half_width, mode=points.mode)
        plus = np.arange(points.size)
        return output, plus, plus[::-1]
    raise InvalidGridError("standard FCS needs a counting grid or stencil")


def standard_fcs_points(points: CountingPoints) -> CountingPoints:
    """Half-field sample set whose surrogate lives on `points`."""
    if isinstance(points, CountingGrid):
        return CountingGrid(points.size * 2, mode=points.mode)
    if isinstance(points, CountingStencil):
        return CountingStencil(step=points.step / 2.0, half_width=points.half_width, mode=points.mode)
    raise InvalidGridError("standard FCS needs a counting grid or stencil")


dynamical_mgf = CountingStatistics.dynamical_mgf
standard_fcs_mgf = CountingStatistics.standard_fcs_mgf
cumulants = CountingStatistics.cumulants
quasiprobabilities = CountingStatistics.quasiprobabilities
redistribute = CountingStatistics.redistribute
asymptotic_statistics = CountingStatistics.asymptotic_statistics
energy_current = CountingStatistics.energy_current
