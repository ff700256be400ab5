import math
from typing import List

import msgspec

from prft.domain.entities.driven_system import common_frequency
from prft.domain.exceptions import CommensurabilityError
from prft.domain.policies.BasePolicy import BasePolicy
from prft.schemas.scenario import (
    APPLICATION_TASKS,
    MODEL_KINDS,
    PHYSICS_TASKS,
    TASKS,
    Scenario,
    struct_fields,
)
from prft.utils.exceptions.PolicyError import PolicyError

ORACLE_MODELS = ("rabi", "jc", "two_mode_jc")
FLOQUET_TASKS = ("floquet", "purity")
PHOTONIC_FAMILIES = ("coherent", "gaussian-squeezed")
CONVENTIONS = ("cycles", "literal")
TAIL_SIGMAS = 8.0

# Unit strings accepted per SI field of the applications block.
UNIT_CHOICES = {
    "photon_frequency": ("Hz", "rad/s"),
    "rabi_frequency": ("rad/s",),
    "power": ("W",),
    "field": ("V/m",),
    "volume": ("m^3",),
    "loss_rate": ("1/km",),
    "distance": ("km",),
    "pulse_duration": ("s",),
}
CONVENTION_UNITS = {"cycles": "Hz", "literal": "rad/s"}

APPLICATION_REQUIREMENTS = {
    "coherence_time": ("photon_frequency", "rabi_frequency"),
    "transfer_rate": ("rabi_frequency", "pulse_duration", "photon_frequency", "power", "loss_rate", "distance"),
    "protocol": ("rabi_frequency", "pulse_duration", "photon_frequency", "power", "loss_rate", "distance"),
}


class ScenarioPolicy(BasePolicy):
    """
    INPUT VALIDATION ONLY - schema and physics checks for scenario documents.

    `decode` turns a raw mapping into a typed Scenario (schema errors raise);
    `validate` returns every cross-field or physics finding without running
    any numerics beyond the commensurability test.
    """

    def decode(self, raw) -> Scenario:
        self.validate_type("scenario", raw, dict)
        self.require_fields(raw, ["name", "tasks"])

        unknown = self.unknown_fields(raw, struct_fields(Scenario))
        if unknown:
            violations = [f"unknown key '{key}'" for key in unknown]
            raise PolicyError(f"Unknown scenario keys: {', '.join(unknown)}", violations)

        try:
            return msgspec.convert(raw, Scenario)
        except msgspec.ValidationError as error:
            raise PolicyError(f"Scenario schema error: {error}")

    def validate(self, scenario: Scenario) -> List[str]:
        violations: List[str] = []
        self.collect(violations, self.validate_string, scenario.name, "Scenario name")

        if not scenario.tasks:
            violations.append("Scenario needs at least one task")
        for task in scenario.tasks:
            self.collect(violations, self.validate_choice, task, "Task", TASKS)

        if scenario.seed < 0:
            violations.append("seed must be >= 0")
        if scenario.threads is not None and scenario.threads < 1:
            violations.append("threads must be >= 1")

        if any(task in PHYSICS_TASKS for task in scenario.tasks):
            violations.extend(self._physics_violations(scenario))
        if any(task in APPLICATION_TASKS for task in scenario.tasks):
            violations.extend(self._application_violations(scenario))
        return violations

    def validate_or_raise(self, scenario: Scenario) -> Scenario:
        violations = self.validate(scenario)
        if violations:
            raise PolicyError(f"Scenario '{scenario.name}' is invalid: {'; '.join(violations)}", violations)
        return scenario

    def _physics_violations(self, scenario: Scenario) -> List[str]:
        violations: List[str] = []
        model = scenario.model
        if model is None:
            return ["physics tasks need a 'model' block"]
        if not scenario.initial:
            violations.append("physics tasks need at least one 'initial' state")
        if scenario.times is None:
            violations.append("physics tasks need a 'times' block")
        else:
            violations.extend(self._time_violations(scenario.times))

        if self.collect(violations, self.validate_choice, model.kind, "Model kind", MODEL_KINDS) is None:
            return violations
        if not model.modes:
            violations.append("model needs at least one mode")
            return violations
        violations.extend(self._mode_violations(model))

        n_modes = len(model.modes)
        for mode in scenario.counting.modes:
            if not 0 <= mode < n_modes:
                violations.append(f"counted mode {mode} outside 0..{n_modes - 1}")
        violations.extend(self._counting_violations(scenario))

        for index, initial in enumerate(scenario.initial):
            violations.extend(self._initial_violations(initial, index, scenario))

        needs_period = any(task in FLOQUET_TASKS for task in scenario.tasks) or any(
            initial.floquet is not None or initial.superposition is not None for initial in scenario.initial
        )
        if needs_period or (scenario.times is not None and scenario.times.periods):
            try:
                common_frequency([mode.frequency for mode in model.modes])
            except CommensurabilityError as error:
                violations.append(f"commensurability: {error}")

        if "oracle_compare" in scenario.tasks:
            if model.kind not in ORACLE_MODELS:
                violations.append(
                    f"oracle_compare needs a model with an exact oracle ({', '.join(ORACLE_MODELS)}), got '{model.kind}'"
                )
            elif model.n_atoms != 1:
                violations.append("oracle_compare supports a single atom only")
        if "purity" in scenario.tasks:
            two_level = model.n_atoms == 1 and (model.kind != "custom" or (model.h0 is not None and len(model.h0) == 2))
            if not two_level:
                violations.append("purity needs a two-level matter system (single atom)")
            for index, initial in enumerate(scenario.initial):
                if initial.superposition is not None and len(initial.superposition) != 2:
                    violations.append(f"initial[{index}].superposition needs two coefficients for purity")
        return violations

    def _mode_violations(self, model) -> List[str]:
        violations: List[str] = []
        for index, mode in enumerate(model.modes):
            self.collect(violations, self.validate_numeric_values, mode.frequency, f"modes[{index}].frequency")
            if (mode.coupling is None) == (mode.bare_coupling is None):
                violations.append(f"modes[{index}] needs exactly one of 'coupling' or 'bare_coupling'")
        if model.kind == "custom":
            if model.h0 is None or model.operators is None:
                violations.append("custom model needs 'h0' and 'operators'")
            elif len(model.operators) != len(model.modes):
                violations.append(
                    f"custom model has {len(model.operators)} operators for {len(model.modes)} modes"
                )
        if model.kind in ("jc", "rabi") and len(model.modes) != 1:
            violations.append(f"'{model.kind}' model takes exactly one mode")
        if model.kind == "two_mode_jc":
            if len(model.modes) != 2:
                violations.append("'two_mode_jc' model takes exactly two modes")
            elif model.modes[0].frequency != model.modes[1].frequency:
                violations.append("'two_mode_jc' modes must share one frequency")
        if model.kind == "three_mode_rabi" and len(model.modes) != 3:
            violations.append("'three_mode_rabi' model takes exactly three modes")
        if model.n_atoms < 1:
            violations.append("n_atoms must be >= 1")
        return violations

    def _time_violations(self, times) -> List[str]:
        violations: List[str] = []
        if times.values is None and times.stop is None:
            violations.append("times need 'stop' or explicit 'values'")
        if times.values is not None:
            if any(b < a for a, b in zip(times.values, times.values[1:])):
                violations.append("time values must be non-decreasing")
        else:
            self.collect(violations, self.validate_integer, times.samples, "times.samples", minimum=1)
            if times.stop is not None:
                self.collect(violations, self.validate_numeric_values, times.stop, "times.stop", allow_zero=True)
        return violations

    def _counting_violations(self, scenario: Scenario) -> List[str]:
        violations: List[str] = []
        counting = scenario.counting
        if counting.window < 0:
            violations.append("counting window must be >= 0")
        points = counting.points
        if points is None:
            return violations
        if points < 2 or points & (points - 1):
            violations.append(f"counting points must be a power of two, got {points}")
        if points < 2 * counting.window + 2:
            violations.append(
                f"aliasing: {points} counting points cannot resolve a photon-number window of "
                f"{counting.window} (needs at least {2 * counting.window + 2})"
            )
        return violations

    def _initial_violations(self, initial, index: int, scenario: Scenario) -> List[str]:
        violations: List[str] = []
        where = f"initial[{index}]"
        matter_choices = [initial.matter, initial.floquet, initial.superposition]
        if sum(choice is not None for choice in matter_choices) > 1:
            violations.append(f"{where} takes only one of 'matter', 'floquet', 'superposition'")
        if initial.superposition is not None and not any(initial.superposition):
            violations.append(f"{where}.superposition cannot be all zero")

        n_modes = len(scenario.model.modes)
        if len(initial.photonic) != n_modes:
            violations.append(f"{where} has {len(initial.photonic)} photonic states for {n_modes} modes")
        for position, photonic in enumerate(initial.photonic):
            violations.extend(self._photonic_violations(photonic, f"{where}.photonic[{position}]"))
        return violations

    def _photonic_violations(self, photonic, where: str) -> List[str]:
        violations: List[str] = []
        if self.collect(violations, self.validate_choice, photonic.family, f"{where}.family", PHOTONIC_FAMILIES) is None:
            return violations
        if photonic.mean < 0:
            violations.append(f"{where}.mean must be >= 0")
            return violations
        variance = photonic.variance
        if variance is None:
            if photonic.family == "gaussian-squeezed":
                violations.append(f"{where} is gaussian-squeezed and needs a variance")
                return violations
            variance = photonic.mean
        elif variance <= 0:
            violations.append(f"{where}.variance must be positive")
            return violations

        if photonic.window is not None:
            if len(photonic.window) != 2 or photonic.window[0] > photonic.window[1]:
                violations.append(f"{where}.window must be [lower, upper]")
                return violations
            tail = TAIL_SIGMAS * math.sqrt(variance)
            lower, upper = photonic.window
            if lower > 0 and photonic.mean - lower < tail or upper - photonic.mean < tail:
                violations.append(f"{where}.window {photonic.window} is narrower than {TAIL_SIGMAS:g} sigma")
        return violations

    def _application_violations(self, scenario: Scenario) -> List[str]:
        block = scenario.applications
        if block is None:
            return ["application tasks need an 'applications' block"]
        violations: List[str] = []
        self.collect(violations, self.validate_choice, block.convention, "convention", CONVENTIONS)

        for task in scenario.tasks:
            for field in APPLICATION_REQUIREMENTS.get(task, ()):
                if getattr(block, field) is None:
                    violations.append(f"{task} needs applications.{field}")
        if "coherence_time" in scenario.tasks and block.power is None and (block.field is None or block.volume is None):
            violations.append("coherence_time needs applications.power or both applications.field and applications.volume")

        for field, unit in block.units.items():
            if field not in UNIT_CHOICES:
                violations.append(f"unknown unit field '{field}'")
                continue
            if unit not in UNIT_CHOICES[field]:
                violations.append(f"{field} must be given in {' or '.join(UNIT_CHOICES[field])}, got '{unit}'")
        frequency_unit = block.units.get("photon_frequency")
        if frequency_unit is not None and block.convention in CONVENTION_UNITS:
            expected = CONVENTION_UNITS[block.convention]
            if frequency_unit != expected:
                violations.append(
                    f"convention '{block.convention}' reads photon_frequency in {expected}, got '{frequency_unit}'"
                )

        for field in UNIT_CHOICES:
            value = getattr(block, field)
            if value is not None:
                self.collect(
                    violations,
                    self.validate_numeric_values,
                    value,
                    f"applications.{field}",
                    allow_zero=field == "loss_rate",
                )
        if block.n_atoms < 1:
            violations.append("applications.n_atoms must be >= 1")
        if "protocol" in scenario.tasks:
            if block.trials < 1:
                violations.append("protocol needs trials >= 1")
            if block.initial_width < 0:
                violations.append("applications.initial_width must be >= 0")
            if block.window is not None and block.window <= 0:
                violations.append("applications.window must be positive")
        return violations
