import math

import msgspec
import pytest

from prft.domain.services import JaynesCummingsParameters, ModelFactory, TwoModeJCPropagator
from prft.persistence import create_unit_of_work

FIG3_COUPLINGS = (0.2, 0.2)
FIG3_PHASES = (0.0, math.pi / 2)


@pytest.fixture
def rabi_system():
    return ModelFactory.rabi_system(1.0, 2.0, 0.3, phase=0.4)


@pytest.fixture
def two_mode_jc():
    """Resonant two-mode JC drive with a quarter-period phase offset."""
    return ModelFactory.two_mode_jc_system(1.0, 1.0, FIG3_COUPLINGS, FIG3_PHASES)


@pytest.fixture
def jc_params(two_mode_jc):
    return JaynesCummingsParameters.from_system(two_mode_jc)


@pytest.fixture
def jc_propagator(two_mode_jc):
    return TwoModeJCPropagator.from_system(two_mode_jc)


@pytest.fixture
def unit_of_work():
    return create_unit_of_work()


@pytest.fixture
def write_scenario(tmp_path):
    def _write(document: dict, name: str = "scenario.json"):
        path = tmp_path / name
        path.write_bytes(msgspec.json.encode(document))
        return str(path)

    return _write


@pytest.fixture
def small_rabi_scenario():
    """Cheap Rabi scenario with every grid-based task."""
    return {
        "name": "small_rabi",
        "description": "small Rabi check",
        "tasks": ["propagate", "cumulants", "quasiprob", "redistribute"],
        "model": {"kind": "rabi", "h_z": 1.0, "modes": [{"frequency": 1.0, "coupling": 0.2}]},
        "initial": [
            {"label": "up", "matter": [1.0, 0.0], "photonic": [{"mean": 400.0, "family": "coherent"}]}
        ],
        "counting": {"modes": [0], "points": 64, "window": 24},
        "times": {"stop": 4.0, "samples": 5},
    }
