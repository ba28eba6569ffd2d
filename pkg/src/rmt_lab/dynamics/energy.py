"""
Containment Energy and Generator

E(x) = E_V(x) + E_W(x) with V(x) = x^2 and W(x) = -log(x^2), its closed-form
image under the particle generator, and a finite-difference generator for
arbitrary test functions.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..core.exceptions import InvalidArgumentError, UnsupportedError
from .sde import ParticleState, SdeConfig, check_distinct, containment_energy_terms, drift


@dataclass(frozen=True)
class EnergyReport:
    """
    Containment energy at one state.

    LE is None for Wishart particles (no closed form).
    """
    E_V: float
    E_W: float
    E: float
    LE: Optional[float]
    lower_bound: float

    def to_dict(self) -> dict:
        return {"E_V": self.E_V, "E_W": self.E_W, "E": self.E, "LE": self.LE, "lower_bound": self.lower_bound}


def energy_lower_bound(x: np.ndarray) -> float:
    """|x|^2 / (2N) + min(1/16, (N-1)/(8N))."""
    n = len(x)
    return float(np.dot(x, x) / (2.0 * n) + min(1.0 / 16.0, (n - 1) / (8.0 * n)))


def generator_energy(state: ParticleState, config: SdeConfig) -> float:
    """
    Closed form of L E:

        4 a/b + a (N-1)/N^2 + [4 a/(N^2 b) - 2 a/N^4] sum_{i != j} 1/(x_i - x_j)^2

    with a = alpha_N, b = beta_N. The OU family adds
    -2 theta |x|^2 / N + theta (N-1)/N.

    Raises:
        UnsupportedError: For Wishart particles
    """
    if config.family == "wishart":
        raise UnsupportedError("No closed-form generator of the energy for Wishart particles")
    x = state.positions
    check_distinct(x)
    n = len(x)
    a = config.alpha_n
    b = config.beta_n_value
    i, j = np.triu_indices(n, k=1)
    inverse_squares = 2.0 * float(np.sum(1.0 / (x[j] - x[i]) ** 2))
    value = 4.0 * a / b + a * (n - 1) / n ** 2 + (4.0 * a / (n ** 2 * b) - 2.0 * a / n ** 4) * inverse_squares
    if config.family == "ou":
        value += -2.0 * config.theta * float(np.dot(x, x)) / n + config.theta * (n - 1) / n
    return value


def energy(state: ParticleState, config: SdeConfig) -> EnergyReport:
    """
    Containment energy report.

    Raises:
        SingularConfigurationError: If two particles coincide
    """
    x = state.positions
    check_distinct(x)
    e_v, e_w = containment_energy_terms(x)
    le = None if config.family == "wishart" else generator_energy(state, config)
    return EnergyReport(e_v, e_w, e_v + e_w, le, energy_lower_bound(x))


def containment_energy(x: np.ndarray) -> float:
    return float(sum(containment_energy_terms(x)))


def generator_fd(
    f: Callable[[np.ndarray], float],
    state: ParticleState,
    config: SdeConfig,
    h: float = 1e-4,
) -> float:
    """
    Generator L f = sum_i (sigma_i^2 / 2) d^2 f/dx_i^2 + b_i df/dx_i with
    central differences of step h and the exact drift b.
    """
    if not h > 0:
        raise InvalidArgumentError(f"h must be positive, got {h}")
    x = state.positions
    if config.ordering_guard and state.n > 1 and state.min_gap <= 2.0 * h:
        raise InvalidArgumentError("Finite-difference stencil would reorder the particles")
    b = drift(state, config)
    half_var = 0.5 * config.diffusion(x) ** 2
    f0 = f(x)
    total = 0.0
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        fp = f(x + e)
        fm = f(x - e)
        total += half_var[i] * (fp - 2.0 * f0 + fm) / (h * h) + b[i] * (fp - fm) / (2.0 * h)
    return float(total)


def energy_growth_bound(config: SdeConfig) -> float:
    """sup of L E over ordered states when beta_N >= 2N^2 (inf otherwise)."""
    n = config.n
    a = config.alpha_n
    b = config.beta_n_value
    if b < 2.0 * n ** 2:
        return math.inf
    bound = 4.0 * a / b + a * (n - 1) / n ** 2
    if config.family == "ou":
        bound += config.theta * (n - 1) / n
    return bound
