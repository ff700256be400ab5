"""Domain Services - Pure numerical calculators and analyzers"""

from prft.domain.services.model_factory import ModelFactory, build_driven_system, spin_half_operators
from prft.domain.services.propagator import (
    IntegratorSpec,
    NumericPropagator,
    propagate_generalized,
    stroboscopic_power,
)
from prft.domain.services.jaynes_cummings import (
    JaynesCummingsParameters,
    TwoModeJCPropagator,
    jc_propagator,
    to_rotating_picture,
    to_schrodinger_picture,
    two_mode_jc_mgf_closed_form,
    two_mode_jc_propagator,
)
from prft.domain.services.photon_resolution import (
    fock_projector_expectation,
    photon_distribution,
    photon_resolved_operators,
    spin_expectations,
)
from prft.domain.services.floquet_analyzer import FloquetAnalyzer
from prft.domain.services.counting_statistics import CountingStatistics, standard_fcs_points
from prft.domain.services.fock_oracle import (
    build_initial_fock_state,
    evolve_rabi_fock,
    evolve_two_mode_jc_fock,
    photon_marginal,
    purity,
    reduced_matter_density,
)
from prft.domain.services.decoherence_calculator import DecoherenceCalculator
from prft.domain.services.communication_calculator import CommunicationCalculator

__all__ = [
    "ModelFactory",
    "build_driven_system",
    "spin_half_operators",
    "IntegratorSpec",
    "NumericPropagator",
    "propagate_generalized",
    "stroboscopic_power",
    "JaynesCummingsParameters",
    "TwoModeJCPropagator",
    "jc_propagator",
    "to_rotating_picture",
    "to_schrodinger_picture",
    "two_mode_jc_mgf_closed_form",
    "two_mode_jc_propagator",
    "fock_projector_expectation",
    "photon_distribution",
    "photon_resolved_operators",
    "spin_expectations",
    "FloquetAnalyzer",
    "CountingStatistics",
    "standard_fcs_points",
    "build_initial_fock_state",
    "evolve_rabi_fock",
    "evolve_two_mode_jc_fock",
    "photon_marginal",
    "purity",
    "reduced_matter_density",
    "DecoherenceCalculator",
    "CommunicationCalculator",
]
