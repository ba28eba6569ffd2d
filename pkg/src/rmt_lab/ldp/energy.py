"""
Large-Deviations Energy of Grid Measures

Free entropy Sigma(mu) = double integral of log|x - y|, the energy
H_beta(mu) = -(beta/2) Sigma(mu) + int x^2/2 dmu, its minimum value -F(beta),
the exact Selberg partition function and the Frostman equilibrium residual.

Grid measures are piecewise constant, so every cell pair integrates log|x - y|
exactly through the second antiderivative G(u) = u^2 log|u| / 2 - 3 u^2 / 4.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import matmul_toeplitz, toeplitz
from scipy.special import gammaln

from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError, OverflowGuardError
from ..measures.empirical import GridMeasure
from ..measures.transforms import log_potential

logger = logging.getLogger(__name__)

MAX_CELLS = 4096
MAX_SELBERG_N = 10_000
BLOCK_ROWS = 512
FROSTMAN_SLACK = 1e-6


@dataclass(frozen=True)
class EnergyBreakdown:
    """
    Energy decomposition of one measure.

    H_beta = -(beta/2) sigma_entropy + potential and I_beta = H_beta + F_beta.
    """
    sigma_entropy: float
    potential: float
    H_beta: float
    I_beta: float
    F_beta: float
    beta: float

    def to_dict(self) -> dict:
        return {
            "sigma_entropy": self.sigma_entropy,
            "potential": self.potential,
            "H_beta": self.H_beta,
            "I_beta": self.I_beta,
            "F_beta": self.F_beta,
            "beta": self.beta,
        }


@dataclass(frozen=True)
class FrostmanReport:
    c_beta: float
    residual_sup: float
    inequality_violations: int
    support_cells: int

    def to_dict(self) -> dict:
        return {
            "c_beta": self.c_beta,
            "residual_sup": self.residual_sup,
            "inequality_violations": self.inequality_violations,
            "support_cells": self.support_cells,
        }


def _second_antiderivative(u: np.ndarray) -> np.ndarray:
    # G'' = log|u|, G(0) = 0
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    safe = np.where(au > 0, au, 1.0)
    return np.where(au > 0, 0.5 * u * u * np.log(safe) - 0.75 * u * u, 0.0)


def _check_grid(mu: GridMeasure) -> None:
    if mu.cells > MAX_CELLS:
        raise InvalidArgumentError(f"Grid measures are limited to {MAX_CELLS} cells, got {mu.cells}")
    if not np.all(np.isfinite(mu.nodes)):
        raise InvalidArgumentError("Grid measure must have bounded support")


def _uniform_pair_column(cells: int, width: float) -> np.ndarray:
    """J(m) = int over [0,w] x [mw, (m+1)w] of log|x - y|, m = 0..cells-1."""
    m = np.arange(cells, dtype=float)
    g = _second_antiderivative
    return g((m + 1.0) * width) - 2.0 * g(m * width) + g((m - 1.0) * width)


def _pair_block(mu: GridMeasure, rows: slice) -> np.ndarray:
    """Cell-pair integrals of log|x - y| for a block of rows."""
    a = mu.left[rows, np.newaxis]
    b = mu.right[rows, np.newaxis]
    c = mu.left[np.newaxis, :]
    d = mu.right[np.newaxis, :]
    g = _second_antiderivative
    return g(b - c) - g(a - c) - g(b - d) + g(a - d)


def log_kernel_matrix(mu: GridMeasure) -> np.ndarray:
    """
    A[k, l] with Sigma(mu) = m^T A m for cell masses m.

    Entries are the exact pair integrals divided by the two cell widths.
    """
    _check_grid(mu)
    w = mu.widths
    if mu.is_uniform:
        return toeplitz(_uniform_pair_column(mu.cells, float(w[0]))) / (w[0] * w[0])
    rows = [
        _pair_block(mu, slice(start, start + BLOCK_ROWS))
        for start in range(0, mu.cells, BLOCK_ROWS)
    ]
    return np.vstack(rows) / np.outer(w, w)


def free_entropy(mu: GridMeasure) -> float:
    """
    Sigma(mu) = sum over cell pairs of d_k d_l int int log|x - y| dx dy.

    The self-cell term is w^2 (log w - 3/2). Uniform grids use a Toeplitz
    product; other grids are summed in row blocks.

    Raises:
        InvalidArgumentError: Above 4096 cells or with unbounded nodes
    """
    _check_grid(mu)
    d = mu.densities
    if mu.is_uniform:
        column = _uniform_pair_column(mu.cells, float(mu.widths[0]))
        return float(d @ matmul_toeplitz(column, d))
    total = 0.0
    for start in range(0, mu.cells, BLOCK_ROWS):
        rows = slice(start, start + BLOCK_ROWS)
        total += float(d[rows] @ (_pair_block(mu, rows) @ d))
    return total


def F_constant(beta: float) -> float:
    """
    F(beta) = (beta/4) log(beta/2) - 3 beta/8, the limit of log(Z_beta^N) / N^2
    and minus the minimum of H_beta.
    """
    if not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    return 0.25 * beta * math.log(beta / 2.0) - 0.375 * beta


def cell_potential(mu: GridMeasure) -> np.ndarray:
    """Per-cell average of x^2 / 2: (a^2 + ab + b^2) / 6."""
    a, b = mu.left, mu.right
    return (a * a + a * b + b * b) / 6.0


def energy_H(mu: GridMeasure, beta: float) -> EnergyBreakdown:
    """
    Energy breakdown of a grid measure.

    Args:
        mu: Grid measure (no atoms, so H is finite)
        beta: Positive inverse temperature

    Returns:
        EnergyBreakdown
    """
    f_beta = F_constant(beta)
    sigma = free_entropy(mu)
    potential = 0.5 * mu.moment(2)
    h = -0.5 * beta * sigma + potential
    return EnergyBreakdown(sigma, potential, h, h + f_beta, f_beta, float(beta))


def energy_H_direct(mu: GridMeasure, beta: float) -> float:
    """
    H_beta as the double integral of f(x, y) = (x^2 + y^2)/4 - (beta/2) log|x - y|,
    assembled cell pair by cell pair.
    """
    if not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    _check_grid(mu)
    m = mu.cell_masses
    quarter_square = 0.5 * cell_potential(mu)
    w = mu.widths
    total = 0.0
    for start in range(0, mu.cells, BLOCK_ROWS):
        rows = slice(start, start + BLOCK_ROWS)
        log_part = _pair_block(mu, rows) / np.outer(w[rows], w)
        f = quarter_square[rows, np.newaxis] + quarter_square[np.newaxis, :] - 0.5 * beta * log_part
        total += float(m[rows] @ (f @ m))
    return total


def rate_function(mu: GridMeasure, beta: float) -> float:
    """I_beta(mu) = H_beta(mu) + F(beta), zero exactly at the beta-semicircle."""
    return energy_H(mu, beta).I_beta


def selberg_Z(n: int, beta: float) -> float:
    """
    log Z_beta^N for the weight prod |x_i - x_j|^beta exp(-N sum x_i^2 / 2):

        (N/2) log(2 pi) - (N/2 + beta N (N-1)/4) log N
        - N log Gamma(1 + beta/2) + sum_j log Gamma(1 + beta j/2)

    Raises:
        OverflowGuardError: For N above 10^4
    """
    if n < 1:
        raise InvalidArgumentError(f"N must be positive, got {n}")
    if n > MAX_SELBERG_N:
        raise OverflowGuardError(f"Selberg evaluation is limited to N <= {MAX_SELBERG_N}")
    if not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    j = np.arange(1, n + 1, dtype=float)
    return float(
        0.5 * n * math.log(2.0 * math.pi)
        - (0.5 * n + 0.25 * beta * n * (n - 1)) * math.log(n)
        - n * gammaln(1.0 + 0.5 * beta)
        + np.sum(gammaln(1.0 + 0.5 * beta * j))
    )


def frostman_residual(mu: GridMeasure, beta: float) -> FrostmanReport:
    """
    Frostman check: beta U(x) - x^2/2 is constant on the support and at most
    that constant off it.

    The constant is the least-squares fit over support cells (mass above
    mass_tol) at cell midpoints.

    Raises:
        InvalidArgumentError: If fewer than two cells carry mass above mass_tol
    """
    if not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    _check_grid(mu)
    mass_tol = get_settings().solver.mass_tol
    on_support = mu.cell_masses > mass_tol
    if np.count_nonzero(on_support) < 2:
        raise InvalidArgumentError(
            "Effective support has fewer than two cells above the mass tolerance"
        )
    x = mu.midpoints
    values = beta * np.asarray(log_potential(mu, x), dtype=float) - 0.5 * x * x
    c = float(np.mean(values[on_support]))
    residual = float(np.max(np.abs(values[on_support] - c)))
    violations = int(np.count_nonzero(values[~on_support] > c + FROSTMAN_SLACK))
    logger.debug("Frostman fit: c=%.6g residual=%.3g violations=%d", c, residual, violations)
    return FrostmanReport(c, residual, violations, int(np.count_nonzero(on_support)))
