"""Problem constants and the step/batch bounds built on them."""
from compopt.theory.bounds import (
    corollary_bounds,
    saga_bounds,
    saga_deviation_bound,
    svrg_contraction_factor,
    svrg_inner_variance,
    svrg_step_bound,
)
from compopt.theory.constants import estimate_constants, level_set_radius, spectral_norms
from compopt.theory.defaults import theoretical_step

__all__ = [
    "corollary_bounds",
    "estimate_constants",
    "level_set_radius",
    "saga_bounds",
    "saga_deviation_bound",
    "spectral_norms",
    "svrg_contraction_factor",
    "svrg_inner_variance",
    "svrg_step_bound",
    "theoretical_step",
]
