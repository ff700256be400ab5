"""Domain Entities - Physical models and numerical containers with validation"""

from prft.domain.entities.mode_spec import ModeSpec
from prft.domain.entities.driven_system import DrivenSystem, common_frequency
from prft.domain.entities.matter_state import MatterState
from prft.domain.entities.photonic_state import PhotonicInitialState
from prft.domain.entities.counting_grid import CountingGrid, CountingPoints, CountingStencil
from prft.domain.entities.propagator_set import GeneralizedPropagatorSet, PhotonResolvedOperators
from prft.domain.entities.floquet_solution import FloquetSolution, QuasienergyDerivatives, fold_quasienergy
from prft.domain.entities.photon_statistics import GeneratingFunctionSamples, PhotonStatistics
from prft.domain.entities.fock_ensemble import (
    ExcitationBlockEnsemble,
    FockEnsemble,
    FockTrajectory,
    FockWindow,
    distribution_cumulants,
)
from prft.domain.entities.physical_units import EPSILON_0, HBAR, PhysicalUnits
from prft.domain.entities.protocol_state import ProtocolState

__all__ = [
    "ModeSpec",
    "DrivenSystem",
    "common_frequency",
    "MatterState",
    "PhotonicInitialState",
    "CountingGrid",
    "CountingPoints",
    "CountingStencil",
    "GeneralizedPropagatorSet",
    "PhotonResolvedOperators",
    "FloquetSolution",
    "QuasienergyDerivatives",
    "fold_quasienergy",
    "GeneratingFunctionSamples",
    "PhotonStatistics",
    "ExcitationBlockEnsemble",
    "FockEnsemble",
    "FockTrajectory",
    "FockWindow",
    "distribution_cumulants",
    "EPSILON_0",
    "HBAR",
    "PhysicalUnits",
    "ProtocolState",
]
