from typing import List

from prft.domain.policies.p_ScenarioPolicy import ScenarioPolicy
from prft.repositories.exceptions import RunStoreError
from prft.utils.exceptions.PolicyError import PolicyError


class ValidateScenarioUseCase:
    """Schema and physics checks of a scenario without running it; never writes files."""

    def __init__(self, unit_of_work):
        self.uow = unit_of_work
        self.policy = ScenarioPolicy()

    def execute(self, key: str) -> List[str]:
        try:
            document = self.uow.scenarios.get(key)
            scenario = self.policy.decode(document.data)
        except PolicyError as e:
            return list(e.violations)
        except RunStoreError as e:
            return [str(e)]
        return self.policy.validate(scenario)
