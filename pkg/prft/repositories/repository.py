"""Base Repository Interface - All repositories implement this contract"""
from abc import ABC, abstractmethod
from typing import List, TypeVar, Generic

T = TypeVar('T')  # Generic type for stored documents


class Repository(ABC, Generic[T]):
    """
    Abstract base repository.

    Concrete repositories read scenario documents or run outputs from some
    storage; use cases only see this contract.
    """

    @abstractmethod
    def get(self, key: str) -> T:
        """
        Retrieve a document by key.

        Args:
            key: Name or path identifying the document

        Returns:
            The stored document

        Raises:
            InputNotFoundError: If nothing is stored under key
        """
        pass

    @abstractmethod
    def list_names(self) -> List[str]:
        """
        Keys of every stored document.

        Returns:
            Sorted list of names
        """
        pass
