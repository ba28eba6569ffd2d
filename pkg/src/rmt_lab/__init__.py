"""
RMT Lab Package

A numerical laboratory for random matrix theory: ensemble samplers,
spectral measures and their transforms, determinantal kernels, interacting
particle dynamics, the mean-field Stieltjes equation and large-deviation
energies, driven from a reproducible command line.

This package provides:
- GUE, GOE, Ginibre, Wishart and Haar samplers with counter-based RNG streams
- Reference laws, Stieltjes/Hilbert transforms and BL/KS distances
- Hermite and Ginibre kernels, hole probabilities and Gumbel rescaling
- Dyson, Ornstein-Uhlenbeck and Wishart particle simulations
- Characteristic solver for the complex Burgers equation
- Free entropy, Selberg integrals and the equilibrium-measure solver
"""

__version__ = "1.0.0"
__author__ = "RMT Lab Team"
__email__ = "contact@example.com"

from .config.settings import Settings, get_settings, set_settings
from .core.ensembles import sample_ginibre, sample_goe, sample_gue, sample_wishart
from .core.exceptions import NumericalFailure, RmtLabError, ValidationFailure
from .core.rng import RngStream
from .dynamics.sde import SdeConfig, simulate
from .kernels.dpp import KernelSpec, kernel
from .ldp.energy import energy_H, selberg_Z
from .ldp.equilibrium import solve_equilibrium
from .measures.distances import bl_distance
from .measures.laws import ReferenceLaw
from .measures.transforms import StieltjesField, stieltjes
from .meanfield.characteristics import CharacteristicQuery, solve_characteristic

__all__ = [
    # Configuration
    "Settings",
    "get_settings",
    "set_settings",

    # Core components
    "RngStream",
    "RmtLabError",
    "ValidationFailure",
    "NumericalFailure",
    "sample_gue",
    "sample_goe",
    "sample_ginibre",
    "sample_wishart",

    # Measures and transforms
    "ReferenceLaw",
    "StieltjesField",
    "stieltjes",
    "bl_distance",

    # Kernels
    "KernelSpec",
    "kernel",

    # Dynamics and mean field
    "SdeConfig",
    "simulate",
    "CharacteristicQuery",
    "solve_characteristic",

    # Large deviations
    "energy_H",
    "selberg_Z",
    "solve_equilibrium",
]
