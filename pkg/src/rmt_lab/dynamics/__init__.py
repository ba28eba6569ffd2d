"""
Particle Dynamics Package

Interacting-particle SDE systems, containment energy and generator, the
Johansson transition density and the martingale part of the empirical measure.
"""

from .energy import (
    EnergyReport,
    containment_energy,
    energy,
    energy_growth_bound,
    energy_lower_bound,
    generator_energy,
    generator_fd,
)
from .johansson import johansson_density, vandermonde, vandermonde_and_harmonicity, vandermonde_gradient
from .martingale import MartingaleResidual, TestFunction, martingale_residual
from .sde import (
    ParticleState,
    SdeConfig,
    TrajectoryDiagnostics,
    TrajectoryRecord,
    collision_frequency,
    drift,
    drift_reference,
    regularized_drift,
    simulate,
    step,
    zero_start_state,
)

__all__ = [
    "SdeConfig",
    "ParticleState",
    "TrajectoryDiagnostics",
    "TrajectoryRecord",
    "drift",
    "drift_reference",
    "regularized_drift",
    "step",
    "simulate",
    "zero_start_state",
    "collision_frequency",
    "EnergyReport",
    "energy",
    "energy_lower_bound",
    "energy_growth_bound",
    "containment_energy",
    "generator_energy",
    "generator_fd",
    "johansson_density",
    "vandermonde",
    "vandermonde_gradient",
    "vandermonde_and_harmonicity",
    "TestFunction",
    "MartingaleResidual",
    "martingale_residual",
]
