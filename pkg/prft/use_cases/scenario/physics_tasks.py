"""Physics tasks of a scenario run: propagation, counting statistics, Floquet analysis and oracle checks"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from prft.domain.entities import CountingStencil, FockWindow, PhotonStatistics
from prft.domain.exceptions import BranchError, InvalidSystemError
from prft.domain.services import (
    CountingStatistics,
    DecoherenceCalculator,
    FloquetAnalyzer,
    build_initial_fock_state,
    evolve_rabi_fock,
    evolve_two_mode_jc_fock,
    photon_marginal,
    photon_resolved_operators,
    spin_expectations,
    standard_fcs_points,
)
from prft.use_cases.scenario.context import CLOSED_FORM_KINDS, InitialCondition, ScenarioContext
from prft.utils.exceptions.ToleranceError import ToleranceError

logger = logging.getLogger(__name__)

TRIAL_STEP = 0.025
TRIAL_SHRINK = 8.0
MIN_TRIAL_STEP = 1e-7
ASYMPTOTIC_STEP = 0.01
UNITARITY_TOLERANCE = 1e-8
IDENTITY_TOLERANCE = 1e-10
PARSEVAL_TOLERANCE = 1e-8
SUM_RULE_TOLERANCE = 1e-8
ENERGY_CURRENT_TOLERANCE = 1e-2
ENERGY_CURRENT_RESOLUTION = 256
ENERGY_CURRENT_PERIODS = 2
STANDARD_FCS_TOLERANCE = 1e-6
NORM_TOLERANCE = 1e-8
KAPPA1_RELATIVE, KAPPA1_ABSOLUTE = 0.02, 0.5
KAPPA2_RELATIVE, KAPPA2_ABSOLUTE = 0.05, 1.0
# share of the initial variance allowed for the correlation between the
# initial photon number and the transfer, which the oracle keeps
KAPPA2_VARIANCE_RELATIVE = 0.01
CUMULANT_ORDERS = (1, 2, 3, 4)


def l1_distance(n_a, p_a, n_b, p_b) -> float:
    """sum_n |p_a(n) - p_b(n)| over the union of both supports."""
    lower = min(int(n_a[0]), int(n_b[0]))
    upper = max(int(n_a[-1]), int(n_b[-1]))
    dense_a = np.zeros(upper - lower + 1)
    dense_b = np.zeros(upper - lower + 1)
    dense_a[np.asarray(n_a) - lower] = p_a
    dense_b[np.asarray(n_b) - lower] = p_b
    return float(np.sum(np.abs(dense_a - dense_b)))


class PhysicsTasks:
    """
    Runs the physics tasks of one scenario against a ScenarioContext.

    Intermediate results (cumulants, quasiprobabilities, oracle trajectories)
    are cached per initial state and mode, so the order of tasks in the
    scenario does not matter. Every invariant check is recorded in
    `invariants`; a breach raises ToleranceError naming it.
    """

    def __init__(self, context: ScenarioContext, results, summary: dict, invariants: dict):
        self.context = context
        self.results = results
        self.summary = summary
        self.invariants = invariants
        self.tasks = context.scenario.tasks
        self.modes = list(context.scenario.counting.modes)
        self.window = context.scenario.counting.window
        self._samples: Dict[Tuple[str, int], tuple] = {}
        self._cumulants: Dict[Tuple[str, int], np.ndarray] = {}
        self._quasi: Dict[Tuple[str, int], np.ndarray] = {}
        self._oracles: Dict[str, object] = {}

    @property
    def times(self) -> np.ndarray:
        return self.context.times

    @property
    def with_oracle(self) -> bool:
        return "oracle_compare" in self.tasks

    # ------------------------------------------------------------ invariants

    def check(self, invariant: str, value: float, tolerance: float, scope: str = ""):
        name = f"{invariant} [{scope}]" if scope else invariant
        ok = bool(value <= tolerance)
        self.invariants[name] = {"value": float(value), "tolerance": float(tolerance), "ok": ok}
        if not ok:
            raise ToleranceError(invariant, f"{scope}: {value:.3e} exceeds {tolerance:.3e}")

    def skip(self, invariant: str, reason: str, scope: str = ""):
        """Record a check that could not be evaluated; it neither passes nor fails the run."""
        name = f"{invariant} [{scope}]" if scope else invariant
        self.invariants[name] = {"value": None, "tolerance": None, "ok": True, "skipped": reason}
        logger.info("skipped %s: %s", name, reason)

    def _check_samples(self, samples, scope: str):
        self.check("M(0) = 1", samples.normalization_defect(), samples.NORMALIZATION_TOLERANCE, scope)
        self.check("M(-chi) = M(chi)*", samples.conjugation_defect(), samples.CONJUGATION_TOLERANCE, scope)

    def _check_propagators(self, propset, scope: str):
        self.check("unitarity", propset.unitarity_defect(), UNITARITY_TOLERANCE, scope)
        self.check("U(0) = 1", propset.identity_defect(), IDENTITY_TOLERANCE, scope)

    # --------------------------------------------------------------- samples

    def samples(self, initial: InitialCondition, mode: int):
        """(samples, propagator set) on the stencil or grid the scenario asks for."""
        key = (initial.label, mode)
        if key not in self._samples:
            if self.context.scenario.counting.stencil:
                self._samples[key] = self._stencil_samples(initial, mode)
            else:
                propset = self.context.propagate(self.context.grid(mode))
                self._samples[key] = (CountingStatistics.dynamical_mgf(propset, initial.matter), propset)
        return self._samples[key]

    def _stencil_samples(self, initial: InitialCondition, mode: int, times: Optional[np.ndarray] = None):
        """Adaptive stencil samples over the output times, or over `times` without caching."""
        if times is None:
            propagate = self.context.propagate
        else:
            def propagate(points):
                return self.context.propagator.propagate(points, times)

        step = TRIAL_STEP
        while True:
            trial = CountingStencil(step=step, mode=mode)
            propset = propagate(trial)
            samples = CountingStatistics.dynamical_mgf(propset, initial.matter)
            try:
                estimate = CountingStatistics.cumulants(samples, (1, 2))
                break
            except BranchError:
                if step / TRIAL_SHRINK < MIN_TRIAL_STEP:
                    raise
                step /= TRIAL_SHRINK
                logger.debug("trial stencil too coarse for %s mode %d, retrying with h=%g", initial.label, mode, step)
        stencil = CountingStencil.adapted_to(
            float(np.max(np.abs(estimate[:, 0]))), float(np.max(np.abs(estimate[:, 1]))), mode=mode
        )
        logger.debug("stencil for %s mode %d: %r", initial.label, mode, stencil)
        if stencil.step == trial.step:
            return samples, propset
        propset = propagate(stencil)
        return CountingStatistics.dynamical_mgf(propset, initial.matter), propset

    def cumulants(self, initial: InitialCondition, mode: int) -> np.ndarray:
        key = (initial.label, mode)
        if key not in self._cumulants:
            samples, _ = self.samples(initial, mode)
            self._check_samples(samples, f"{initial.label} mode {mode}")
            self._cumulants[key] = CountingStatistics.cumulants(samples, CUMULANT_ORDERS)
        return self._cumulants[key]

    def quasiprobabilities(self, initial: InitialCondition, mode: int) -> np.ndarray:
        key = (initial.label, mode)
        if key not in self._quasi:
            grid = self.context.grid(mode)
            grid.check_window(self.window)
            propset = self.context.propagate(grid)
            samples = CountingStatistics.dynamical_mgf(propset, initial.matter)
            scope = f"{initial.label} mode {mode}"
            self._check_samples(samples, scope)
            q = CountingStatistics.quasiprobabilities(samples, self.window)
            stats = PhotonStatistics(mode, self.times, self.cumulants(initial, mode)[:, :2],
                                     quasiprobabilities=q, window=self.window)
            self.check("sum q = 1", float(np.max(np.abs(q.sum(axis=1) - 1.0))), SUM_RULE_TOLERANCE, scope)
            for violation in stats.check_invariants(SUM_RULE_TOLERANCE):
                raise ToleranceError(violation, scope)
            self._quasi[key] = q
        return self._quasi[key]

    # ---------------------------------------------------------------- oracle

    def oracle(self, initial: InitialCondition):
        """Exact Fock-space trajectory of an initial state (cached)."""
        if initial.label in self._oracles:
            return self._oracles[initial.label]
        model = self.context.model
        system = self.context.system
        settings = self.context.scenario.oracle
        semiclassical = settings.semiclassical_elements

        def coupling(spec):
            value = spec.coupling if semiclassical else spec.bare_coupling
            if value is None:
                raise InvalidSystemError(
                    f"exact oracle needs the bare coupling of {spec.label} (give a coupling with a mean photon number)"
                )
            return value

        windows = [
            window if window is not None else FockWindow.around(state, drift=self.expected_drift(mode))
            for mode, (state, window) in enumerate(zip(initial.photonic, initial.windows))
        ]
        if model.kind == "rabi":
            spec = system.modes[0]
            fock = build_initial_fock_state(initial.matter, initial.photonic, windows)
            trajectory = evolve_rabi_fock(model.h_z, spec.frequency, coupling(spec), fock, self.times,
                                          semiclassical_elements=semiclassical)
        elif model.kind == "jc":
            spec = system.modes[0]
            fock = build_initial_fock_state(initial.matter, [initial.photonic[0], 0],
                                            [windows[0], FockWindow.around_number(0)])
            trajectory = evolve_two_mode_jc_fock(model.h_z, spec.frequency, (coupling(spec), 0.0), fock,
                                                 self.times, semiclassical_elements=semiclassical,
                                                 threads=self.context.threads)
        else:
            fock = build_initial_fock_state(initial.matter, initial.photonic, windows)
            trajectory = evolve_two_mode_jc_fock(model.h_z, system.modes[0].frequency,
                                                 [coupling(spec) for spec in system.modes], fock, self.times,
                                                 semiclassical_elements=semiclassical,
                                                 threads=self.context.threads)

        scope = f"oracle {initial.label}"
        self.check("norm conservation", float(np.max(np.abs(trajectory.norms() - 1.0))), NORM_TOLERANCE, scope)
        if trajectory.block_norms is not None:
            drift = float(np.max(np.abs(trajectory.block_norms - trajectory.block_norms[0])))
            self.check("excitation-number conservation", drift, NORM_TOLERANCE, scope)
        self._oracles[initial.label] = trajectory
        return trajectory

    def expected_drift(self, mode: int) -> float:
        """
        Largest photon transfer max_mu |E'_mu| t of a mode up to the last time,
        used to pad default oracle windows. Zero for the Rabi model.
        """
        if self.context.model.kind not in CLOSED_FORM_KINDS:
            return 0.0
        slopes = self.context.phase_derivatives(mode).first
        return float(np.max(np.abs(slopes))) * float(self.times[-1])

    def oracle_cumulants(self, initial: InitialCondition, mode: int) -> np.ndarray:
        absolute = photon_marginal(self.oracle(initial), mode)["cumulants"]
        return absolute - absolute[0]

    # ----------------------------------------------------------------- tasks

    def propagate(self):
        context = self.context
        propset = context.propagate(context.grid(self.modes[0]))
        scope = f"grid mode {self.modes[0]}"
        self._check_propagators(propset, scope)
        operators = photon_resolved_operators(propset, float(self.times[-1]))
        self.check("Parseval sum rule", operators.parseval_defect(), PARSEVAL_TOLERANCE, scope)
        self.summary["propagate"] = {
            "counting_points": propset.points.size,
            "unitarity_defect": propset.unitarity_defect(),
            "aliasing_norm": operators.aliasing_norm,
            "photon_support": operators.support().tolist(),
        }
        if propset.dimension != 2:
            return

        header = ["initial", "t", "sx", "sy", "sz"]
        if self.with_oracle:
            header += ["sx_oracle", "sy_oracle", "sz_oracle"]
        rows = []
        for initial in context.initials:
            spins = spin_expectations(propset, initial.matter)
            exact = self.oracle(initial).spin_expectations() if self.with_oracle else None
            for index, t in enumerate(self.times):
                row = [initial.label, t, *spins[index]]
                if exact is not None:
                    row += list(exact[index])
                rows.append(row)
        self.results.write_table("spin.csv", header, rows)

    def cumulant_table(self):
        header = ["initial", "t", "mode"] + [f"kappa_{n}" for n in CUMULANT_ORDERS]
        if self.with_oracle:
            header += [f"oracle_kappa_{n}" for n in CUMULANT_ORDERS]
        rows = []
        summary = {}
        for initial in self.context.initials:
            for mode in self.modes:
                kappa = self.cumulants(initial, mode)
                exact = self.oracle_cumulants(initial, mode) if self.with_oracle else None
                for index, t in enumerate(self.times):
                    row = [initial.label, t, mode, *kappa[index]]
                    if exact is not None:
                        row += list(exact[index])
                    rows.append(row)
                summary[f"{initial.label}/mode{mode}"] = {
                    "kappa_1_final": kappa[-1, 0],
                    "kappa_2_final": kappa[-1, 1],
                }
            self._check_energy_current(initial)
        self.results.write_table("cumulants.csv", header, rows)
        self.summary["cumulants"] = summary

    def energy_current_times(self) -> Optional[np.ndarray]:
        """Dense times over the first drive periods, or None for an aperiodic drive."""
        period = self.context.system.period
        if period is None:
            return None
        samples = ENERGY_CURRENT_PERIODS * ENERGY_CURRENT_RESOLUTION + 1
        return np.linspace(0.0, ENERGY_CURRENT_PERIODS * period, samples)

    def _check_energy_current(self, initial: InitialCondition):
        """sum_k omega_k d kappa_1,k/dt = -<dH/dt>, integrated over the first drive periods."""
        system = self.context.system
        times = self.energy_current_times()
        if times is None:
            self.skip("energy-current identity", "drive has no common period", initial.label)
            return
        photon_energy = np.zeros(times.size)
        propset = None
        for mode in range(system.n_modes):
            samples, propset = self._stencil_samples(initial, mode, times)
            kappa1 = CountingStatistics.cumulants(samples, (1,))[:, 0]
            photon_energy += float(system.frequencies[mode]) * (kappa1 - kappa1[0])
        current = CountingStatistics.energy_current(system, propset, initial.matter)
        absorbed = cumulative_trapezoid(current, times, initial=0.0)
        defect = float(np.max(np.abs(photon_energy + absorbed)))
        scale = max(1.0, float(np.max(np.abs(absorbed))))
        self.check("energy-current identity", defect / scale, ENERGY_CURRENT_TOLERANCE, initial.label)

    def quasiprobability_table(self):
        rows = []
        minima = {}
        shifts = np.arange(-self.window, self.window + 1)
        for initial in self.context.initials:
            for mode in self.modes:
                q = self.quasiprobabilities(initial, mode)
                for index, t in enumerate(self.times):
                    rows.extend([initial.label, t, mode, int(dn), value] for dn, value in zip(shifts, q[index]))
                minima[f"{initial.label}/mode{mode}"] = {
                    "min_quasiprobability": float(q.min()),
                    "min_quasiprobability_final": float(q[-1].min()),
                    "negative_weight_final": float(-np.sum(np.minimum(q[-1], 0.0))),
                }
        self.results.write_table("quasiprob.csv", ["initial", "t", "mode", "dn", "q"], rows)
        self.summary["quasiprob"] = minima

    def redistribution_table(self):
        rows = []
        summary = {}
        for initial in self.context.initials:
            for mode in self.modes:
                q = self.quasiprobabilities(initial, mode)
                state = initial.photonic[mode]
                lower, upper = state.window_bounds()
                initial_n = np.arange(lower, upper + 1)
                n_values, distributions = CountingStatistics.redistribute(q, initial_n, state.probabilities(initial_n))
                stats = PhotonStatistics(mode, self.times, np.zeros((self.times.size, 1)),
                                         n_values=n_values, distributions=distributions)
                for violation in stats.check_invariants(SUM_RULE_TOLERANCE):
                    raise ToleranceError(violation, f"{initial.label} mode {mode}")
                for index, t in enumerate(self.times):
                    rows.extend(["prft", initial.label, mode, t, int(n), p]
                                for n, p in zip(n_values, distributions[index]))

                entry = {"n_min": int(n_values[0]), "n_max": int(n_values[-1])}
                if self.with_oracle:
                    exact_n, exact_p = self.oracle(initial).photon_distribution(mode)
                    for index, t in enumerate(self.times):
                        rows.extend(["oracle", initial.label, mode, t, int(n), p]
                                    for n, p in zip(exact_n, exact_p[index]))
                    entry["l1_distance"] = [
                        l1_distance(n_values, distributions[index], exact_n, exact_p[index])
                        for index in range(self.times.size)
                    ]
                summary[f"{initial.label}/mode{mode}"] = entry
        self.results.write_table("pn.csv", ["source", "initial", "mode", "t", "n", "p"], rows)
        self.summary["redistribute"] = summary

    def purity_table(self):
        context = self.context
        solution = context.floquet_solution()
        # every mode records which Floquet branch the matter took
        n_modes = len(context.system.modes)
        slopes = np.array([context.phase_derivatives(mode).first for mode in range(n_modes)])
        if slopes.shape[1] != 2:
            raise InvalidSystemError("the purity prediction needs a two-level matter system")
        rows = []
        summary = {}
        for initial in context.initials:
            coefficients = initial.coefficients
            if coefficients is None:
                coefficients = FloquetAnalyzer.expand(initial.matter, solution)
            coefficients = coefficients / np.linalg.norm(coefficients)
            predicted = DecoherenceCalculator.purity_prediction(
                coefficients[0], coefficients[1], slopes[:, 0], slopes[:, 1],
                [state.variance for state in initial.photonic], self.times,
            )
            exact = self.oracle(initial).purity() if self.with_oracle else None
            for index, t in enumerate(self.times):
                rows.append([initial.label, t, predicted[index], None if exact is None else exact[index]])
            entry = {"purity_prft_final": float(predicted[-1])}
            if exact is not None:
                entry["purity_oracle_final"] = float(exact[-1])
                entry["max_deviation"] = float(np.max(np.abs(predicted - exact)))
            summary[initial.label] = entry
        self.results.write_table("purity.csv", ["initial", "t", "purity_prft", "purity_oracle"], rows)
        self.summary["purity"] = summary

    def floquet_table(self):
        context = self.context
        period = context.system.require_period()
        rows = []
        summary = {"period": period, "modes": {}}
        for mode in self.modes:
            derivatives = context.phase_derivatives(mode)
            for mu in range(derivatives.first.size):
                rows.append([mode, mu, derivatives.quasienergies[mu], derivatives.first[mu], derivatives.second[mu],
                             derivatives.first_error[mu], derivatives.second_error[mu]])
            entry = {
                "quasienergies": derivatives.quasienergies,
                "first_derivatives": derivatives.first,
                "second_derivatives": derivatives.second,
                "asymptotic": {},
            }

            drift = float(np.max(np.abs(derivatives.first))) * float(self.times[-1])
            stencil = CountingStencil.adapted_to(drift, 0.0, mode=mode, cap=2.0 * ASYMPTOTIC_STEP)
            solution = FloquetAnalyzer.decompose(context.propagator.propagate(stencil, [0.0, period]), period)
            for initial in context.initials:
                coefficients = FloquetAnalyzer.expand(initial.matter, context.floquet_solution())
                asymptotic = CountingStatistics.asymptotic_statistics(solution, derivatives, coefficients, self.times)
                kappa = CountingStatistics.cumulants(asymptotic["samples"], (1, 2))
                entry["asymptotic"][initial.label] = {
                    "predicted_flux": -float(np.sum(np.abs(coefficients) ** 2 * derivatives.first)),
                    "mean_change_final": float(asymptotic["mean_change"][-1]),
                    "variance_change_final": float(asymptotic["variance_change"][-1]),
                    "kappa_1_final": float(kappa[-1, 0]),
                    "kappa_2_final": float(kappa[-1, 1]),
                }
            summary["modes"][str(mode)] = entry
        self.results.write_table(
            "floquet.csv",
            ["mode", "mu", "quasienergy", "first_derivative", "second_derivative", "first_error", "second_error"],
            rows,
        )
        self.summary["floquet"] = summary

    def standard_fcs_table(self):
        header = ["initial", "t", "mode", "kappa_1_prft", "kappa_2_prft", "kappa_3_prft",
                  "kappa_1_fcs", "kappa_2_fcs", "kappa_3_fcs", "mgf_difference"]
        rows = []
        summary = {}
        for initial in self.context.initials:
            for mode in self.modes:
                samples, _ = self.samples(initial, mode)
                propset = self.context.propagate(standard_fcs_points(samples.points))
                surrogate = CountingStatistics.standard_fcs_mgf(propset, initial.matter)
                prft = CountingStatistics.cumulants(samples, (1, 2, 3))
                fcs = CountingStatistics.cumulants(surrogate, (1, 2, 3))
                difference = np.max(np.abs(surrogate.values - samples.values), axis=1)
                for index, t in enumerate(self.times):
                    rows.append([initial.label, t, mode, *prft[index], *fcs[index], difference[index]])
                scope = f"{initial.label} mode {mode}"
                gap = np.abs(prft[:, 0] - fcs[:, 0]) / np.maximum(1.0, np.abs(prft[:, 0]))
                self.check("standard FCS first cumulant", float(gap.max()), STANDARD_FCS_TOLERANCE, scope)
                summary[f"{initial.label}/mode{mode}"] = {
                    "kappa_2_prft_final": prft[-1, 1],
                    "kappa_2_fcs_final": fcs[-1, 1],
                    "kappa_3_prft_final": prft[-1, 2],
                    "kappa_3_fcs_final": fcs[-1, 2],
                    "max_mgf_difference": float(difference.max()),
                }
        self.results.write_table("standard_fcs.csv", header, rows)
        self.summary["standard_fcs"] = summary

    def oracle_comparison(self):
        settings = self.context.scenario.oracle
        summary = {}
        for initial in self.context.initials:
            for mode in self.modes:
                kappa = self.cumulants(initial, mode)
                exact = self.oracle_cumulants(initial, mode)
                deviation1 = float(np.max(np.abs(kappa[:, 0] - exact[:, 0])))
                deviation2 = float(np.max(np.abs(kappa[:, 1] - exact[:, 1])))
                tolerance1 = max(KAPPA1_RELATIVE * float(np.max(np.abs(exact[:, 0]))), KAPPA1_ABSOLUTE)
                tolerance2 = max(KAPPA2_RELATIVE * float(np.max(np.abs(exact[:, 1]))), KAPPA2_ABSOLUTE,
                                 KAPPA2_VARIANCE_RELATIVE * initial.photonic[mode].variance)
                entry = {
                    "kappa_1_deviation": deviation1,
                    "kappa_1_tolerance": tolerance1,
                    "kappa_2_deviation": deviation2,
                    "kappa_2_tolerance": tolerance2,
                    "finite_width_diffusion": self._diffusion_estimate(initial, mode),
                }
                if self.context.system.dimension == 2:
                    propset = self.samples(initial, mode)[1]
                    spins = spin_expectations(propset, initial.matter)
                    entry["spin_deviation"] = float(np.max(np.abs(spins - self.oracle(initial).spin_expectations())))
                summary[f"{initial.label}/mode{mode}"] = entry
                if settings.check:
                    scope = f"{initial.label} mode {mode}"
                    self.check("oracle kappa_1 agreement", deviation1, tolerance1, scope)
                    self.check("oracle kappa_2 agreement", deviation2, tolerance2, scope)
        self.summary["oracle_compare"] = summary

    def _diffusion_estimate(self, initial: InitialCondition, mode: int) -> Optional[float]:
        """(E'' t)^2 / (4 sigma^2) at the last time for Floquet-state initial conditions."""
        if initial.coefficients is None or np.count_nonzero(np.abs(initial.coefficients) > 1e-12) != 1:
            return None
        mu = int(np.argmax(np.abs(initial.coefficients)))
        second = float(self.context.phase_derivatives(mode).second[mu])
        return (second * float(self.times[-1])) ** 2 / (4.0 * initial.photonic[mode].variance)

    def run(self, task: str):
        handlers = {
            "propagate": self.propagate,
            "cumulants": self.cumulant_table,
            "quasiprob": self.quasiprobability_table,
            "redistribute": self.redistribution_table,
            "purity": self.purity_table,
            "oracle_compare": self.oracle_comparison,
            "floquet": self.floquet_table,
            "standard_fcs": self.standard_fcs_table,
        }
        logger.info("running task %s", task)
        handlers[task]()

    def tables(self) -> List[str]:
        return self.results.written()
