"""File-system repository implementations"""

from prft.persistence.repositories.scenario_repository_impl import ScenarioRepositoryImpl
from prft.persistence.repositories.result_repository_impl import ResultRepositoryImpl, encode_json, format_cell

__all__ = [
    "ScenarioRepositoryImpl",
    "ResultRepositoryImpl",
    "encode_json",
    "format_cell",
]
