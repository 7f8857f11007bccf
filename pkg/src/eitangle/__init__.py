"""Photon-atom entangled states from an EIT-driven two-mode Kerr model."""
from ._accel import backend
from .effective_model import EffectiveParams, derive_params, energy, evolve, evolve_time, theta
from .entanglement import (
    TwoTermBipartite,
    closed_form_concurrence,
    entanglement_entropy,
    schmidt_concurrence,
    schmidt_spectrum,
    two_term_concurrence,
)
from .fockspace import (
    TruncatedMode,
    TwoModeState,
    coherent_amplitudes,
    default_cutoff,
    fidelity_up_to_global_phase,
    inner_product,
    normalize,
    product_coherent,
    tensor,
)
from .full_model import Cutoffs, FullModelParams, adiabatic_validation, evolve_full, initial_product_state
from .revival import CoefficientGrid, RationalTau, assemble, coefficients, verify_determining_identity

__version__ = "0.1.0"

__all__ = [
    "CoefficientGrid",
    "Cutoffs",
    "EffectiveParams",
    "FullModelParams",
    "RationalTau",
    "TruncatedMode",
    "TwoModeState",
    "TwoTermBipartite",
    "adiabatic_validation",
    "assemble",
    "backend",
    "closed_form_concurrence",
    "coefficients",
    "coherent_amplitudes",
    "default_cutoff",
    "derive_params",
    "energy",
    "entanglement_entropy",
    "evolve",
    "evolve_full",
    "evolve_time",
    "fidelity_up_to_global_phase",
    "initial_product_state",
    "inner_product",
    "normalize",
    "product_coherent",
    "schmidt_concurrence",
    "schmidt_spectrum",
    "tensor",
    "theta",
    "two_term_concurrence",
    "verify_determining_identity",
]
