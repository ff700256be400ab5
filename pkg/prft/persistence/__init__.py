"""Persistence Layer - File-system implementations and run transactions

This module exposes a factory helper `create_unit_of_work()` which wires
the concrete repository implementations into a `RunDirectoryUnitOfWork`.
"""

from prft.persistence.unit_of_work import (
    RunDirectoryUnitOfWork,
    TransactionScope,
    UnitOfWork,
)

from prft.persistence.repositories import (
    ScenarioRepositoryImpl,
    ResultRepositoryImpl,
)


def create_unit_of_work() -> RunDirectoryUnitOfWork:
    """Create a RunDirectoryUnitOfWork pre-wired with repository implementations.

    Returns:
        RunDirectoryUnitOfWork: ready-to-use unit of work instance
    """
    scenario_repo = ScenarioRepositoryImpl()
    result_repo = ResultRepositoryImpl()

    return RunDirectoryUnitOfWork(
        scenario_repo,
        result_repo,
    )


__all__ = [
    "create_unit_of_work",
    "RunDirectoryUnitOfWork",
    "TransactionScope",
    "UnitOfWork",
]
