"""Scenario context - domain objects built once per run from a validated Scenario"""
import logging
import math
from typing import Dict, List, Optional

import numpy as np

from prft.domain.entities import (
    CountingGrid,
    CountingStencil,
    FockWindow,
    MatterState,
    ModeSpec,
    PhotonicInitialState,
)
from prft.domain.exceptions import InvalidStateError
from prft.domain.services import (
    FloquetAnalyzer,
    IntegratorSpec,
    ModelFactory,
    NumericPropagator,
    TwoModeJCPropagator,
    build_driven_system,
)
from prft.schemas.scenario import InitialSettings, Scenario

logger = logging.getLogger(__name__)

CLOSED_FORM_KINDS = ("jc", "two_mode_jc")
FLOQUET_STENCIL_STEP = 5e-4


class InitialCondition:
    """One initial state of a scenario: matter state plus photonic state per mode."""

    def __init__(self, label: str, matter: MatterState, photonic: List[PhotonicInitialState],
                 windows: List[Optional[FockWindow]], coefficients: Optional[np.ndarray] = None):
        self.label = label
        self.matter = matter
        self.photonic = photonic
        self.windows = windows
        self.coefficients = coefficients

    def __repr__(self):
        return f"<InitialCondition {self.label} matter={self.matter.label}>"


class ScenarioContext:
    """
    Driven system, propagator back end, output times and initial states of
    a scenario. Propagator sets are cached per sample set, so tasks sharing
    counting points share one integration.
    """

    def __init__(self, scenario: Scenario, *, threads: int, steps_per_period: int, counting_points: int):
        self.scenario = scenario
        self.model = scenario.model
        self.threads = threads
        self.counting_points = scenario.counting.points or counting_points
        self.system = self._build_system()
        self.propagator = self._build_propagator(steps_per_period)
        self.times = self._build_times()
        self._propsets: Dict[tuple, object] = {}
        self._floquet = None
        self._derivatives: Dict[int, object] = {}
        self.initials = [self._build_initial(settings, index) for index, settings in enumerate(scenario.initial)]

    # ------------------------------------------------------------------ system

    def _amplitudes(self) -> List[Optional[float]]:
        if not self.scenario.initial:
            return [None] * len(self.model.modes)
        photonic = self.scenario.initial[0].photonic
        return [math.sqrt(state.mean) if state.mean > 0 else None for state in photonic]

    def _mode_specs(self) -> List[ModeSpec]:
        specs = []
        for index, (mode, amplitude) in enumerate(zip(self.model.modes, self._amplitudes())):
            label = mode.label or f"mode{index + 1}"
            if mode.bare_coupling is not None:
                specs.append(ModeSpec(mode.frequency, bare_coupling=mode.bare_coupling, amplitude=amplitude,
                                      phase=mode.phase, label=label))
            else:
                specs.append(ModeSpec(mode.frequency, coupling=mode.coupling, amplitude=amplitude,
                                      phase=mode.phase, label=label))
        return specs

    def _build_system(self):
        model = self.model
        if model is None:
            return None
        specs = self._mode_specs()
        require_period = model.kind != "custom" or any(
            task in ("floquet", "purity") for task in self.scenario.tasks
        )
        if model.kind == "rabi":
            system = ModelFactory.rabi_system(model.h_z, specs[0].frequency, specs[0].coupling,
                                              specs[0].phase, specs[0].amplitude)
        elif model.kind == "jc":
            system = ModelFactory.jaynes_cummings_system(model.h_z, specs[0].frequency, specs[0].coupling,
                                                         specs[0].phase, specs[0].amplitude)
        elif model.kind == "two_mode_jc":
            system = ModelFactory.two_mode_jc_system(
                model.h_z,
                specs[0].frequency,
                [spec.coupling for spec in specs],
                [spec.phase for spec in specs],
                [spec.amplitude for spec in specs] if all(spec.amplitude for spec in specs) else None,
            )
        elif model.kind == "three_mode_rabi":
            system = ModelFactory.multi_mode_rabi_system(
                model.h_z,
                [spec.frequency for spec in specs],
                [spec.coupling for spec in specs],
                [spec.phase for spec in specs],
            )
        else:
            operators = [np.asarray(op, dtype=complex) for op in model.operators]
            system = build_driven_system(
                np.asarray(model.h0, dtype=complex),
                zip(operators, specs),
                rotating_wave=model.rotating_wave,
                require_period=require_period,
            )
        if model.n_atoms > 1:
            system = ModelFactory.ensemble_system(system, model.n_atoms)
        logger.info("built %s system: %r", model.kind, system)
        return system

    def _build_propagator(self, steps_per_period: int):
        if self.system is None:
            return None
        if self.model.kind in CLOSED_FORM_KINDS and self.model.n_atoms == 1:
            return TwoModeJCPropagator.from_system(self.system)
        return NumericPropagator(self.system, IntegratorSpec(steps_per_period=steps_per_period, threads=self.threads))

    def _build_times(self) -> Optional[np.ndarray]:
        settings = self.scenario.times
        if settings is None:
            return None
        if settings.values is not None:
            raw = np.asarray(settings.values, dtype=float)
        else:
            raw = np.linspace(0.0, float(settings.stop), int(settings.samples))
        if settings.periods:
            raw = raw * self.system.require_period()
        return np.unique(np.concatenate([[0.0], raw]))

    # ------------------------------------------------------------ propagation

    def propagate(self, points):
        """Cached propagator set of `points` over the output times."""
        key = (type(points).__name__, points.mode, points.size, float(points.chi[1] - points.chi[0]))
        if key not in self._propsets:
            logger.debug("propagating %r", points)
            self._propsets[key] = self.propagator.propagate(points, self.times)
        return self._propsets[key]

    def grid(self, mode: int) -> CountingGrid:
        return CountingGrid(self.counting_points, mode=mode)

    def floquet_solution(self):
        """chi = 0 Floquet solution (states at t = 0), computed once."""
        if self._floquet is None:
            period = self.system.require_period()
            stencil = CountingStencil(step=FLOQUET_STENCIL_STEP, half_width=2, mode=0)
            propset = self.propagator.propagate(stencil, [0.0, period])
            self._floquet = FloquetAnalyzer.decompose(propset, period)
        return self._floquet

    def phase_derivatives(self, mode: int):
        if mode not in self._derivatives:
            self._derivatives[mode] = FloquetAnalyzer.phase_derivatives(self.system, mode, propagator=self.propagator)
        return self._derivatives[mode]

    # ---------------------------------------------------------------- initial

    def _build_initial(self, settings: InitialSettings, index: int) -> InitialCondition:
        photonic = []
        windows = []
        for mode, state in zip(self.model.modes, settings.photonic):
            photonic.append(PhotonicInitialState(state.mean, state.variance, phase=mode.phase, family=state.family))
            windows.append(FockWindow(*state.window) if state.window is not None else None)

        coefficients = None
        if settings.matter is not None:
            matter = MatterState.normalized(settings.matter, label=settings.label)
        elif settings.floquet is not None or settings.superposition is not None:
            _, states = self.floquet_solution().at_zero()
            if settings.floquet is not None:
                if not 0 <= settings.floquet < states.shape[1]:
                    raise InvalidStateError(
                        f"Floquet index {settings.floquet} outside 0..{states.shape[1] - 1}"
                    )
                coefficients = np.zeros(states.shape[1], dtype=complex)
                coefficients[settings.floquet] = 1.0
            else:
                coefficients = np.zeros(states.shape[1], dtype=complex)
                given = np.asarray(settings.superposition, dtype=complex)
                coefficients[: given.size] = given
                coefficients = coefficients / np.linalg.norm(coefficients)
            matter = MatterState.normalized(states @ coefficients, basis="floquet", label=settings.label)
        else:
            ground = np.zeros(self.system.dimension, dtype=complex)
            ground[0] = 1.0
            matter = MatterState(ground, label="up")

        label = settings.label or f"initial{index}"
        return InitialCondition(label, matter, photonic, windows, coefficients)
