"""Result Repository Interface"""
from abc import ABC, abstractmethod
from typing import List, Sequence

from prft.schemas.scenario import RunManifest


class ResultRepository(ABC):
    """
    Repository interface for run outputs.

    Writes go to the directory the unit of work binds for the current
    transaction; readers accept any path so every output round-trips.
    """

    @abstractmethod
    def bind(self, directory: str) -> None:
        """Direct subsequent writes into directory"""
        pass

    @abstractmethod
    def write_table(self, name: str, header: Sequence[str], rows) -> str:
        """
        Write a CSV table.

        Args:
            name: File name (e.g. "cumulants.csv")
            header: Column names
            rows: Iterable of row sequences; floats are written shortest round-trip

        Returns:
            File name written
        """
        pass

    @abstractmethod
    def write_summary(self, summary: dict) -> str:
        """Write summary.json (sorted keys)"""
        pass

    @abstractmethod
    def write_manifest(self, manifest: RunManifest) -> str:
        """Write manifest.json"""
        pass

    @abstractmethod
    def read_table(self, path: str) -> dict:
        """
        Read a CSV table back.

        Returns:
            {"header": [...], "rows": [[...], ...]} with numeric cells as float
        """
        pass

    @abstractmethod
    def read_summary(self, path: str) -> dict:
        """Read summary.json or manifest.json back"""
        pass

    @abstractmethod
    def written(self) -> List[str]:
        """File names written in the current transaction"""
        pass
