"""Schemas - msgspec Structs describing scenario files and run manifests"""

from prft.schemas.scenario import (
    APPLICATION_TASKS,
    MODEL_KINDS,
    PHYSICS_TASKS,
    TASKS,
    ApplicationSettings,
    CountingSettings,
    InitialSettings,
    ModelSettings,
    ModeSettings,
    OracleSettings,
    PhotonicSettings,
    RunManifest,
    Scenario,
    TimeSettings,
    struct_fields,
)

__all__ = [
    "APPLICATION_TASKS",
    "MODEL_KINDS",
    "PHYSICS_TASKS",
    "TASKS",
    "ApplicationSettings",
    "CountingSettings",
    "InitialSettings",
    "ModelSettings",
    "ModeSettings",
    "OracleSettings",
    "PhotonicSettings",
    "RunManifest",
    "Scenario",
    "TimeSettings",
    "struct_fields",
]
