"""Scenario file schema - typed msgspec Structs for scenario JSON/TOML documents"""
from typing import Dict, List, Optional

import msgspec

MODEL_KINDS = ("jc", "rabi", "two_mode_jc", "three_mode_rabi", "custom")
TASKS = (
    "propagate",
    "cumulants",
    "quasiprob",
    "redistribute",
    "purity",
    "oracle_compare",
    "floquet",
    "standard_fcs",
    "coherence_time",
    "transfer_rate",
    "protocol",
)
PHYSICS_TASKS = ("propagate", "cumulants", "quasiprob", "redistribute", "purity", "oracle_compare",
                 "floquet", "standard_fcs")
APPLICATION_TASKS = ("coherence_time", "transfer_rate", "protocol")


class ModeSettings(msgspec.Struct, forbid_unknown_fields=True):
    frequency: float
    coupling: Optional[float] = None
    bare_coupling: Optional[float] = None
    phase: float = 0.0
    label: Optional[str] = None


class ModelSettings(msgspec.Struct, forbid_unknown_fields=True):
    """Model in units of h_z (of omega_1 for the three-mode model)."""

    kind: str
    modes: List[ModeSettings]
    h_z: float = 1.0
    h0: Optional[List[List[float]]] = None
    operators: Optional[List[List[List[float]]]] = None
    rotating_wave: bool = False
    n_atoms: int = 1


class PhotonicSettings(msgspec.Struct, forbid_unknown_fields=True):
    mean: float
    variance: Optional[float] = None
    family: str = "coherent"
    window: Optional[List[int]] = None


class InitialSettings(msgspec.Struct, forbid_unknown_fields=True):
    """
    Exactly one matter description: spin-basis amplitudes, a Floquet index
    or Floquet superposition coefficients (real, normalized on use).
    """

    photonic: List[PhotonicSettings]
    matter: Optional[List[float]] = None
    floquet: Optional[int] = None
    superposition: Optional[List[float]] = None
    label: Optional[str] = None


class CountingSettings(msgspec.Struct, forbid_unknown_fields=True):
    modes: List[int] = msgspec.field(default_factory=lambda: [0])
    points: Optional[int] = None
    window: int = 40
    stencil: bool = True


class TimeSettings(msgspec.Struct, forbid_unknown_fields=True):
    stop: Optional[float] = None
    samples: int = 25
    values: Optional[List[float]] = None
    periods: bool = False


class OracleSettings(msgspec.Struct, forbid_unknown_fields=True):
    semiclassical_elements: bool = False
    check: bool = True


class ApplicationSettings(msgspec.Struct, forbid_unknown_fields=True):
    """SI block: explicit units, see PhysicalUnits."""

    photon_frequency: Optional[float] = None
    rabi_frequency: Optional[float] = None
    power: Optional[float] = None
    field: Optional[float] = None
    volume: Optional[float] = None
    loss_rate: Optional[float] = None
    distance: Optional[float] = None
    pulse_duration: Optional[float] = None
    n_atoms: int = 1
    convention: str = "cycles"
    units: Dict[str, str] = msgspec.field(default_factory=dict)
    trials: int = 100_000
    initial_width: float = 0.0
    window: Optional[float] = None


class Scenario(msgspec.Struct, forbid_unknown_fields=True):
    name: str
    tasks: List[str]
    description: str = ""
    model: Optional[ModelSettings] = None
    initial: List[InitialSettings] = msgspec.field(default_factory=list)
    counting: CountingSettings = msgspec.field(default_factory=CountingSettings)
    times: Optional[TimeSettings] = None
    oracle: OracleSettings = msgspec.field(default_factory=OracleSettings)
    applications: Optional[ApplicationSettings] = None
    seed: int = 0
    threads: Optional[int] = None
    output: Optional[str] = None


class RunManifest(msgspec.Struct):
    scenario: str
    source: str
    inputs: dict
    versions: dict
    timings: dict
    outputs: List[str]
    invariants: dict


def struct_fields(struct_type) -> dict:
    """Nested map of allowed keys: {field: nested map or None}."""
    fields = {}
    hints = msgspec.structs.fields(struct_type)
    for info in hints:
        nested = _struct_of(info.type)
        fields[info.encode_name] = struct_fields(nested) if nested is not None else None
    return fields


def _struct_of(annotation):
    if isinstance(annotation, type) and issubclass(annotation, msgspec.Struct):
        return annotation
    for argument in getattr(annotation, "__args__", ()) or ():
        found = _struct_of(argument)
        if found is not None:
            return found
    return None
