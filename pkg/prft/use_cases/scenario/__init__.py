"""Scenario use cases - run, validate and list scenario files"""

from prft.use_cases.scenario.run_scenario import RunScenarioUseCase
from prft.use_cases.scenario.validate_scenario import ValidateScenarioUseCase
from prft.use_cases.scenario.list_scenarios import ListScenariosUseCase

__all__ = [
    "RunScenarioUseCase",
    "ValidateScenarioUseCase",
    "ListScenariosUseCase",
]
