"""Domain policies package (validation-only policies).

Policies live under `prft.domain.policies` to keep input validation next to
the domain objects the inputs become.
"""

from prft.domain.policies.BasePolicy import BasePolicy
from prft.domain.policies.p_ScenarioPolicy import ScenarioPolicy

__all__ = [
    "BasePolicy",
    "ScenarioPolicy",
]
