"""Unit of Work Pattern - Stages run outputs and publishes them atomically"""
import logging
import os
import shutil
import tempfile
from abc import ABC, abstractmethod
from contextlib import contextmanager
from typing import Generator, Optional

from prft.repositories import ResultRepository, ScenarioRepository
from prft.repositories.exceptions import FileAccessError, OutputConflictError

logger = logging.getLogger(__name__)


class UnitOfWork(ABC):
    """
    Unit of Work Pattern

    Gives use cases access to the scenario and result repositories and
    makes a run's outputs all-or-nothing.

    Usage:
        with unit_of_work.transaction("out/fig2a"):
            unit_of_work.results.write_table("cumulants.csv", header, rows)
            unit_of_work.results.write_summary(summary)
            # Published on success, discarded on failure
    """

    scenarios: ScenarioRepository
    results: ResultRepository

    @abstractmethod
    def commit(self) -> None:
        """Publish staged outputs"""
        pass

    @abstractmethod
    def rollback(self) -> None:
        """Discard staged outputs"""
        pass

    @abstractmethod
    @contextmanager
    def transaction(self, output_dir: str) -> Generator:
        """
        Context manager for one run.

        Publishes on success, discards on exception; the exception itself
        propagates unchanged so callers can map it to an exit code.

        Yields:
            Self (for access to repositories)
        """
        pass


class RunDirectoryUnitOfWork(UnitOfWork):
    """
    File-system implementation of Unit of Work.

    Outputs are written to a staging directory next to the target and moved
    into the target only on commit. Files already in the target that the
    run does not write are left alone.
    """

    def __init__(self, scenario_repo: ScenarioRepository, result_repo: ResultRepository):
        """
        Args:
            scenario_repo: ScenarioRepository implementation
            result_repo: ResultRepository implementation
        """
        self.scenarios = scenario_repo
        self.results = result_repo
        self.output_dir: Optional[str] = None
        self.staging_dir: Optional[str] = None

    def begin(self, output_dir: str) -> None:
        target = os.path.abspath(output_dir)
        if os.path.exists(target) and not os.path.isdir(target):
            raise OutputConflictError(f"Output path '{output_dir}' exists and is not a directory", path=target)
        parent = os.path.dirname(target)
        try:
            os.makedirs(parent, exist_ok=True)
            self.staging_dir = tempfile.mkdtemp(prefix=".prft-staging-", dir=parent)
        except OSError as e:
            raise FileAccessError(f"Cannot stage outputs next to '{output_dir}': {str(e)}", path=parent)
        self.output_dir = target
        self.results.bind(self.staging_dir)

    def commit(self) -> None:
        """Move every staged file into the output directory"""
        if self.staging_dir is None:
            return
        try:
            os.makedirs(self.output_dir, exist_ok=True)
            for name in sorted(os.listdir(self.staging_dir)):
                os.replace(os.path.join(self.staging_dir, name), os.path.join(self.output_dir, name))
            logger.info("published run outputs to %s", self.output_dir)
        except OSError as e:
            self.rollback()
            raise FileAccessError(f"Failed to publish outputs: {str(e)}", path=self.output_dir)
        shutil.rmtree(self.staging_dir, ignore_errors=True)
        self.staging_dir = None

    def rollback(self) -> None:
        """Remove the staging directory"""
        if self.staging_dir is not None:
            shutil.rmtree(self.staging_dir, ignore_errors=True)
            logger.info("discarded staged outputs for %s", self.output_dir)
        self.staging_dir = None

    @contextmanager
    def transaction(self, output_dir: str) -> Generator:
        self.begin(output_dir)
        try:
            yield self
        except BaseException:
            self.rollback()
            raise
        self.commit()


class TransactionScope:
    """
    Helper for managing transaction state.

    Equivalent to `transaction()` for callers that prefer an explicit object.
    """

    def __init__(self, unit_of_work: RunDirectoryUnitOfWork, output_dir: str):
        self.unit_of_work = unit_of_work
        self.output_dir = output_dir
        self.is_active = False

    def __enter__(self):
        self.unit_of_work.begin(self.output_dir)
        self.is_active = True
        return self.unit_of_work

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            self.unit_of_work.rollback()
            self.is_active = False
            return False
        else:
            self.unit_of_work.commit()
            self.is_active = False
            return False
