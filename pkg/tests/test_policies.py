import copy

import pytest

from prft.config import ApplicationConfig
from prft.domain.policies import ScenarioPolicy
from prft.utils.exceptions import PolicyError


@pytest.fixture
def policy():
    return ScenarioPolicy()


def test_valid_scenario_has_no_findings(policy, small_rabi_scenario):
    scenario = policy.decode(small_rabi_scenario)
    assert scenario.name == "small_rabi"
    assert scenario.counting.points == 64
    assert policy.validate(scenario) == []
    assert policy.validate_or_raise(scenario) is scenario


def test_unknown_keys_are_rejected_with_their_path(policy, small_rabi_scenario):
    document = copy.deepcopy(small_rabi_scenario)
    document["model"]["modes"][0]["colour"] = "red"
    document["extra"] = 1
    with pytest.raises(PolicyError) as error:
        policy.decode(document)
    assert set(error.value.violations) == {"unknown key 'model.modes[0].colour'", "unknown key 'extra'"}


@pytest.mark.parametrize(
    "document",
    [
        {"tasks": ["propagate"]},
        {"name": "x", "tasks": "propagate"},
        {"name": "x", "tasks": ["propagate"], "model": {"kind": "rabi", "modes": [{"frequency": "fast"}]}},
    ],
)
def test_schema_errors_raise(policy, document):
    with pytest.raises(PolicyError):
        policy.decode(document)


def findings(policy, document):
    return policy.validate(policy.decode(document))


def test_aliasing_window_is_reported(policy, small_rabi_scenario):
    document = copy.deepcopy(small_rabi_scenario)
    document["counting"] = {"modes": [0], "points": 64, "window": 40}
    violations = findings(policy, document)
    assert any(v.startswith("aliasing:") for v in violations)


def test_incommensurate_frequencies_are_reported(policy, small_rabi_scenario):
    document = copy.deepcopy(small_rabi_scenario)
    document["model"] = {
        "kind": "three_mode_rabi",
        "modes": [
            {"frequency": 1.0, "coupling": 0.1},
            {"frequency": 2 ** 0.5, "coupling": 0.1},
            {"frequency": 3 ** 0.5, "coupling": 0.1},
        ],
    }
    document["initial"][0]["photonic"] = [{"mean": 400.0}] * 3
    document["tasks"] = ["floquet"]
    violations = findings(policy, document)
    assert any(v.startswith("commensurability:") for v in violations)


@pytest.mark.parametrize(
    "patch, expected",
    [
        ({"tasks": ["teleport"]}, "Task must be one of"),
        ({"seed": -1}, "seed must be >= 0"),
        ({"counting": {"modes": [3], "points": 64, "window": 4}}, "counted mode 3 outside 0..0"),
        ({"counting": {"modes": [0], "points": 48, "window": 4}}, "counting points must be a power of two"),
        ({"model": {"kind": "rabi", "modes": [{"frequency": 1.0}]}}, "needs exactly one of 'coupling'"),
        ({"model": {"kind": "rabi", "modes": [{"frequency": 1.0, "coupling": 0.1}] * 2}}, "exactly one mode"),
        ({"times": {"samples": 5}}, "times need 'stop' or explicit 'values'"),
        ({"initial": [{"photonic": [{"mean": 10.0, "family": "gaussian-squeezed"}]}]}, "needs a variance"),
        ({"initial": [{"photonic": [{"mean": 400.0, "window": [390, 410]}]}]}, "narrower than 8 sigma"),
        ({"initial": [{"photonic": [{"mean": 400.0}], "matter": [1, 0], "floquet": 0}]}, "takes only one of"),
        ({"tasks": ["oracle_compare"], "model": {"kind": "three_mode_rabi", "modes": [
            {"frequency": 1.0, "coupling": 0.1}] * 3}}, "oracle_compare needs a model"),
    ],
)
def test_physics_findings(policy, small_rabi_scenario, patch, expected):
    document = copy.deepcopy(small_rabi_scenario)
    document.update(patch)
    violations = findings(policy, document)
    assert any(expected in v for v in violations), violations


def test_application_findings(policy):
    document = {
        "name": "link",
        "tasks": ["transfer_rate", "coherence_time"],
        "applications": {
            "photon_frequency": 400e12,
            "rabi_frequency": 40e6,
            "convention": "literal",
            "units": {"photon_frequency": "Hz", "speed": "m/s"},
        },
    }
    violations = findings(policy, document)
    assert "transfer_rate needs applications.power" in violations
    assert "unknown unit field 'speed'" in violations
    assert any("convention 'literal' reads photon_frequency in rad/s" in v for v in violations)
    assert any(v.startswith("coherence_time needs applications.power") for v in violations)


def test_validate_or_raise_lists_every_finding(policy, small_rabi_scenario):
    document = copy.deepcopy(small_rabi_scenario)
    document["seed"] = -1
    document["counting"] = {"modes": [0], "points": 48, "window": 30}
    scenario = policy.decode(document)
    with pytest.raises(PolicyError) as error:
        policy.validate_or_raise(scenario)
    assert len(error.value.violations) >= 3


# ---------------------------------------------------------------- environment configuration


def test_config_defaults():
    assert ApplicationConfig.threads() >= 1
    assert ApplicationConfig.counting_points() & (ApplicationConfig.counting_points() - 1) == 0


@pytest.mark.parametrize(
    "attribute, value, reader",
    [
        ("THREADS", "zero", "threads"),
        ("THREADS", "0", "threads"),
        ("STEPS_PER_PERIOD", "-5", "steps_per_period"),
        ("COUNTING_POINTS", "100", "counting_points"),
        ("LOG_LEVEL", "chatty", "log_level"),
    ],
)
def test_config_rejects_bad_environment(monkeypatch, attribute, value, reader):
    monkeypatch.setattr(ApplicationConfig, attribute, value)
    with pytest.raises(PolicyError):
        getattr(ApplicationConfig, reader)()


def test_config_normalizes_values(monkeypatch):
    monkeypatch.setattr(ApplicationConfig, "LOG_LEVEL", " debug ")
    monkeypatch.setattr(ApplicationConfig, "THREADS", "4")
    monkeypatch.setattr(ApplicationConfig, "OUTPUT_DIR", "   ")
    assert ApplicationConfig.log_level() == "DEBUG"
    assert ApplicationConfig.threads() == 4
    assert ApplicationConfig.output_dir() == "prft-output"
