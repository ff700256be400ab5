"""Use cases - application workflows orchestrating policies, services and repositories"""

from prft.use_cases.scenario import ListScenariosUseCase, RunScenarioUseCase, ValidateScenarioUseCase

__all__ = [
    "RunScenarioUseCase",
    "ValidateScenarioUseCase",
    "ListScenariosUseCase",
]
