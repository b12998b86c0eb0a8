"""Certified heights and arithmetic distances for morphisms of projective space."""

__version__ = "0.1.0"

from .canonical import canonical_height, compute_canonical_height
from .conjugation import PglMap, conjugate, dynamical_distance_search
from .distance import Delta_hat, complexity, delta_hat, sup_estimates
from .height_bounds import find_certificate, is_morphism
from .interpolation import monomial_matrix, prop9_slack, recover_map
from .intervals import HeightInterval
from .morphisms import Morphism, construct, phi_A, power_map
from .points import ProjPoint, normalize, parse_point

__all__ = [
    "Delta_hat", "HeightInterval", "Morphism", "PglMap", "ProjPoint", "canonical_height",
    "complexity", "compute_canonical_height", "conjugate", "construct", "delta_hat",
    "dynamical_distance_search", "find_certificate", "is_morphism", "monomial_matrix",
    "normalize", "parse_point", "phi_A", "power_map", "prop9_slack", "recover_map",
    "sup_estimates",
]
