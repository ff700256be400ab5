"""
prft - photon-resolved Floquet toolkit.

Semiclassical Floquet dynamics of driven matter systems with counting
fields: photon-number statistics of the driving modes, an exact Fock-space
oracle for the Rabi and Jaynes-Cummings models, decoherence estimates and
the communication-protocol calculators built on them.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
