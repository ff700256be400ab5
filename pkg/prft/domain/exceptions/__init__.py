"""Domain Layer Exceptions - Physics and numerical rule violations"""


class DomainError(Exception):
    """Base exception for all domain logic errors"""
    pass


class InvalidSystemError(DomainError):
    """Hamiltonian, coupling or mode data violates domain rules"""
    pass


class CommensurabilityError(DomainError):
    """Mode frequencies have no common period"""
    pass


class InvalidStateError(DomainError):
    """Matter or photonic state violates domain rules"""
    pass


class InvalidGridError(DomainError):
    """Counting grid or stencil violates domain rules"""
    pass


class IntegrationError(DomainError):
    """Propagation failed at a given counting field and time"""

    def __init__(self, message: str, chi=None, t: float = None):
        super().__init__(message)
        self.chi = chi
        self.t = t


class DegeneracyError(DomainError):
    """Two quasienergies collide, so Floquet labels are ambiguous"""

    def __init__(self, message: str, pair: tuple = None):
        super().__init__(message)
        self.pair = pair


class BranchError(DomainError):
    """A continued branch (log or quasienergy) jumps discontinuously"""
    pass


class CoverageError(DomainError):
    """Samples or amplitudes do not cover what the operation needs"""
    pass


class WindowError(DomainError):
    """A photon-number window is too small (aliasing or clipping)"""
    pass


class NegativeProbabilityError(DomainError):
    """Redistributed probabilities fall below the negativity tolerance"""
    pass


class FockLeakageError(DomainError):
    """Fock-space truncation leaks weight through a window edge"""

    def __init__(self, message: str, edge: str = None):
        super().__init__(message)
        self.edge = edge


class ProtocolConfigurationError(DomainError):
    """Protocol simulation parameters are inconsistent"""
    pass
