"""
Kernels Package

Hermite machinery, GUE and Ginibre determinantal kernels, correlation
functions, the Ginibre moduli sampler, hole probabilities and the Gumbel
rescaling of the spectral radius.
"""

from .dpp import (
    KernelSpec,
    correlation_det,
    gue_density1,
    gue_eigenvalue_density,
    gue_kernel,
    kernel,
    kernel_trace,
)
from .ginibre import (
    GumbelRescale,
    TruncatedExpGap,
    ginibre_density1,
    ginibre_infinite_kernel,
    ginibre_kernel,
    gumbel_rescale,
    hole_probability,
    sample_ginibre_moduli,
    sample_spectral_radius,
    truncated_exp_gap,
)
from .hermite import HermiteBasis, gamma_h, hermite, hermite_table

__all__ = [
    "HermiteBasis",
    "gamma_h",
    "hermite",
    "hermite_table",
    "KernelSpec",
    "kernel",
    "kernel_trace",
    "gue_kernel",
    "gue_density1",
    "gue_eigenvalue_density",
    "correlation_det",
    "ginibre_density1",
    "ginibre_kernel",
    "ginibre_infinite_kernel",
    "TruncatedExpGap",
    "truncated_exp_gap",
    "sample_ginibre_moduli",
    "sample_spectral_radius",
    "hole_probability",
    "GumbelRescale",
    "gumbel_rescale",
]
