"""
Mean-Field Package

Characteristic solver for the limit Stieltjes transform of the Dyson and
Ornstein-Uhlenbeck flows, with finite-difference checks of the PDE.
"""

from .characteristics import (
    CharacteristicQuery,
    CharacteristicSolution,
    burgers_residual,
    dyson_scaling_check,
    frozen_semicircle,
    mean_field_value,
    ou_longtime,
    solve_characteristic,
    stationary_residual,
)

__all__ = [
    "CharacteristicQuery",
    "CharacteristicSolution",
    "solve_characteristic",
    "mean_field_value",
    "dyson_scaling_check",
    "ou_longtime",
    "burgers_residual",
    "frozen_semicircle",
    "stationary_residual",
]
