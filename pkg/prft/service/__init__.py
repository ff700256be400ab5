"""Composition root - default repository wiring for the use cases"""

# Repository-backed Unit of Work (pre-wired)
from prft.persistence import create_unit_of_work

# Create a default unit of work instance (can be injected into use-cases)
UOW = create_unit_of_work()

__all__ = [
    "UOW",
]
