"""Domain Layer - Physics, numerics and validation"""

from prft.domain.exceptions import DomainError

__all__ = [
    "DomainError",
]
