"""
Large Deviations Package

Energy functional, free entropy, Selberg partition function, Frostman
residual, the equilibrium-measure solver and Monte Carlo probes.
"""

from .energy import (
    EnergyBreakdown,
    F_constant,
    FrostmanReport,
    energy_H,
    energy_H_direct,
    free_entropy,
    frostman_residual,
    log_kernel_matrix,
    rate_function,
    selberg_Z,
)
from .equilibrium import EquilibriumSolveReport, solve_equilibrium
from .probe import (
    LargestEigenvalueStats,
    concentration_variance,
    largest_eigenvalue_rate,
    largest_eigenvalue_stats,
    ldp_probe,
)

__all__ = [
    "EnergyBreakdown",
    "FrostmanReport",
    "EquilibriumSolveReport",
    "LargestEigenvalueStats",
    "free_entropy",
    "log_kernel_matrix",
    "energy_H",
    "energy_H_direct",
    "rate_function",
    "F_constant",
    "selberg_Z",
    "frostman_residual",
    "solve_equilibrium",
    "ldp_probe",
    "largest_eigenvalue_rate",
    "concentration_variance",
    "largest_eigenvalue_stats",
]
