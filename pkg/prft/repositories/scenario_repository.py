"""Scenario Repository Interface"""
from abc import abstractmethod

from prft.repositories.repository import Repository


class ScenarioDocument:
    """Raw scenario mapping plus where it came from."""

    def __init__(self, name: str, data: dict, source: str):
        self.name = name
        self.data = data
        self.source = source

    def __repr__(self):
        return f"<ScenarioDocument {self.name} from {self.source}>"


class ScenarioRepository(Repository[ScenarioDocument]):
    """
    Repository interface for scenario documents.

    Keys are either a bundled scenario name (`fig2a`) or a path to a
    JSON / TOML file.
    """

    @abstractmethod
    def get(self, key: str) -> ScenarioDocument:
        """
        Load a scenario document.

        Args:
            key: Bundled name or file path

        Returns:
            ScenarioDocument with the undecoded mapping

        Raises:
            InputNotFoundError: Unknown name and no such file
            FileAccessError: File exists but does not parse
        """
        pass

    @abstractmethod
    def describe(self, name: str) -> str:
        """One-line description of a bundled scenario"""
        pass
