"""Repository Interfaces - Abstract data access contracts"""

from prft.repositories.repository import Repository
from prft.repositories.scenario_repository import ScenarioDocument, ScenarioRepository
from prft.repositories.result_repository import ResultRepository
from prft.repositories.exceptions import (
    RunStoreError,
    InputNotFoundError,
    OutputConflictError,
    FileAccessError,
)

__all__ = [
    "Repository",
    "ScenarioDocument",
    "ScenarioRepository",
    "ResultRepository",
    "RunStoreError",
    "InputNotFoundError",
    "OutputConflictError",
    "FileAccessError",
]
