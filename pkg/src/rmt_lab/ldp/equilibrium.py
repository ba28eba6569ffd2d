"""
Equilibrium Measure Solver

Minimizes the discretized energy

    E(m) = -(beta/2) m^T A m + q^T m

over probability vectors of cell masses by entropic mirror descent
(multiplicative updates) with a backtracking step size. A is the exact
cell-pair log kernel and q the cell averages of x^2 / 2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError, SolverFailureError
from ..measures.distances import bl_distance
from ..measures.empirical import GridMeasure
from ..measures.laws import ReferenceLaw
from .energy import F_constant, cell_potential, log_kernel_matrix

logger = logging.getLogger(__name__)

GRID_MARGIN = 0.5
EDGE_TAIL_MASS = 1e-4


@dataclass(frozen=True)
class EquilibriumSolveReport:
    iterations: int
    final_energy: float
    bl_distance_to_sigma_beta: float
    converged: bool
    beta: float
    edges: Tuple[float, float]
    energy_trace: List[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_energy": self.final_energy,
            "target_energy": -F_constant(self.beta),
            "bl_distance_to_sigma_beta": self.bl_distance_to_sigma_beta,
            "converged": self.converged,
            "beta": self.beta,
            "edges": list(self.edges),
        }


def _default_nodes(beta: float, cells: int) -> np.ndarray:
    half = math.sqrt(2.0 * beta) + GRID_MARGIN
    return np.linspace(-half, half, cells + 1)


def _edges(nodes: np.ndarray, masses: np.ndarray) -> Tuple[float, float]:
    """Outer nodes of the cells where each tail first reaches EDGE_TAIL_MASS."""
    cumulative = np.cumsum(masses)
    left = int(np.searchsorted(cumulative, EDGE_TAIL_MASS))
    tail = np.cumsum(masses[::-1])
    right = len(masses) - 1 - int(np.searchsorted(tail, EDGE_TAIL_MASS))
    return float(nodes[left]), float(nodes[right + 1])


def solve_equilibrium(
    beta: float,
    grid: Union[int, Sequence[float], np.ndarray] = 512,
    max_iters: int = 2000,
) -> Tuple[GridMeasure, EquilibriumSolveReport]:
    """
    Approximate the minimizer of H_beta on a grid.

    Args:
        beta: Positive inverse temperature
        grid: Cell count (uniform grid on [-sqrt(2 beta) - 0.5, sqrt(2 beta) + 0.5])
              or explicit nodes covering that interval
        max_iters: Iteration cap

    Returns:
        (GridMeasure, EquilibriumSolveReport)

    Raises:
        SolverFailureError: If no descent step exists above the step floor
    """
    if not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    if max_iters < 1:
        raise InvalidArgumentError(f"max_iters must be positive, got {max_iters}")
    if isinstance(grid, (int, np.integer)):
        if grid < 2:
            raise InvalidArgumentError(f"Need at least two cells, got {grid}")
        nodes = _default_nodes(beta, int(grid))
    else:
        nodes = np.asarray(grid, dtype=float)
        edge = math.sqrt(2.0 * beta) + GRID_MARGIN
        if nodes.ndim != 1 or len(nodes) < 3:
            raise InvalidArgumentError("Grid nodes must be a 1-D array of at least three points")
        if nodes[0] > -edge or nodes[-1] < edge:
            raise InvalidArgumentError(
                f"Grid [{nodes[0]}, {nodes[-1]}] does not cover [{-edge:.4g}, {edge:.4g}]"
            )

    solver = get_settings().solver
    cells = len(nodes) - 1
    start = GridMeasure(nodes, np.full(cells, 1.0 / cells))
    kernel = log_kernel_matrix(start)
    q = cell_potential(start)

    def energy_of(m: np.ndarray) -> float:
        return float(-0.5 * beta * (m @ (kernel @ m)) + q @ m)

    m = start.cell_masses.copy()
    current = energy_of(m)
    trace = [current]
    step = solver.equilibrium_step
    converged = False
    iterations = 0

    while iterations < max_iters:
        iterations += 1
        gradient = q - beta * (kernel @ m)
        while True:
            exponent = -step * gradient
            exponent -= exponent.max()
            proposal = m * np.exp(exponent)
            proposal /= proposal.sum()
            candidate = energy_of(proposal)
            if candidate < current:
                break
            step *= 0.5
            if step < solver.equilibrium_step_floor:
                if current - candidate > -solver.equilibrium_tol:
                    # stalled at the minimum within round-off
                    converged = True
                    break
                raise SolverFailureError(
                    f"No descent step above {solver.equilibrium_step_floor:g} at iteration {iterations}",
                    trace=trace,
                )
        if converged:
            break
        decrease = current - candidate
        m, current = proposal, candidate
        trace.append(current)
        step *= solver.equilibrium_step_growth
        if decrease < solver.equilibrium_tol:
            converged = True
            break

    result = GridMeasure(nodes, m)
    distance = bl_distance(result, ReferenceLaw.semicircle_beta(beta))
    edges = _edges(nodes, m)
    logger.debug(
        "Equilibrium beta=%g: %d iterations, energy %.8f (target %.8f), BL %.3g, converged=%s",
        beta, iterations, current, -F_constant(beta), distance, converged,
    )
    report = EquilibriumSolveReport(iterations, current, distance, converged, float(beta), edges, trace)
    return result, report
