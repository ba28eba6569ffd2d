"""
Distances Between Spectral Measures

Bounded-Lipschitz distance by its dual linear program on the merged support,
a capped-W1 lower bound for very large supports, Kolmogorov-Smirnov distances
to reference CDFs, and the radial check for the circular law.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError, NumericalFailure, UnsupportedError
from .empirical import EmpiricalMeasure, GridMeasure
from .laws import ReferenceLaw, cdf

logger = logging.getLogger(__name__)

MeasureLike = Union[EmpiricalMeasure, GridMeasure, ReferenceLaw]


@dataclass(frozen=True)
class BLDistance:
    value: float
    mode: str
    points: int


def _weighted_points(mu: MeasureLike) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(mu, EmpiricalMeasure):
        if mu.is_planar:
            raise UnsupportedError("BL distance is implemented for real measures only")
        points, counts = np.unique(mu.atoms, return_counts=True)
        return points, counts / mu.n
    if isinstance(mu, GridMeasure):
        keep = mu.cell_masses > 0
        return mu.midpoints[keep], mu.cell_masses[keep]
    if isinstance(mu, ReferenceLaw):
        if mu.is_planar:
            raise UnsupportedError("BL distance is implemented for real measures only")
        cells = get_settings().quadrature.law_grid_cells
        lo, hi = mu.support()
        nodes = np.linspace(lo, hi, cells + 1)
        atoms = mu.atoms()
        atom_mass = sum(m for _, m in atoms)
        masses = np.clip(np.diff(cdf(mu, nodes)), 0.0, None)
        points = 0.5 * (nodes[:-1] + nodes[1:])
        if atoms:
            # the cdf jump sits in the first cell, move it onto the atom
            masses[0] = max(masses[0] - atom_mass, 0.0)
            points = np.concatenate(([p for p, _ in atoms], points))
            masses = np.concatenate(([m for _, m in atoms], masses))
        order = np.argsort(points, kind="stable")
        masses = masses[order]
        return points[order], masses / masses.sum()
    raise InvalidArgumentError(f"Unsupported measure type {type(mu).__name__}")


def _merged_difference(mu: MeasureLike, nu: MeasureLike) -> Tuple[np.ndarray, np.ndarray]:
    xp, wp = _weighted_points(mu)
    xq, wq = _weighted_points(nu)
    support = np.union1d(xp, xq)
    diff = np.zeros(len(support))
    np.add.at(diff, np.searchsorted(support, xp), wp)
    np.add.at(diff, np.searchsorted(support, xq), -wq)
    return support, diff


def _bl_linear_program(support: np.ndarray, diff: np.ndarray) -> float:
    # variables: f_0..f_{n-1}, a (sup bound), L (Lipschitz bound)
    n = len(support)
    gaps = np.diff(support)
    ia, il = n, n + 1
    eye = sparse.identity(n, format="csr")
    col_a = sparse.csr_matrix(np.full((n, 1), -1.0))
    zero_n = sparse.csr_matrix((n, 1))

    blocks = [
        sparse.hstack([eye, col_a, zero_n]),
        sparse.hstack([-eye, col_a, zero_n]),
    ]
    if n > 1:
        d = sparse.diags([-np.ones(n - 1), np.ones(n - 1)], [0, 1], shape=(n - 1, n))
        col_l = sparse.csr_matrix(-gaps[:, np.newaxis])
        zero_m = sparse.csr_matrix((n - 1, 1))
        blocks.append(sparse.hstack([d, zero_m, col_l]))
        blocks.append(sparse.hstack([-d, zero_m, col_l]))
    budget = sparse.csr_matrix(([1.0, 1.0], ([0, 0], [ia, il])), shape=(1, n + 2))
    blocks.append(budget)

    a_ub = sparse.vstack(blocks, format="csr")
    b_ub = np.zeros(a_ub.shape[0])
    b_ub[-1] = 1.0
    cost = np.concatenate((-diff, [0.0, 0.0]))
    bounds = [(None, None)] * n + [(0.0, None), (0.0, None)]

    result = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not result.success:
        raise NumericalFailure(f"BL linear program failed: {result.message}")
    return max(0.0, -float(result.fun))


def _capped_w1(support: np.ndarray, diff: np.ndarray) -> float:
    # Kantorovich potential of W1, rescaled into the BL unit ball
    cum = np.cumsum(diff)[:-1]
    gaps = np.diff(support)
    w1 = float(np.sum(np.abs(cum) * gaps))
    potential = np.concatenate(([0.0], np.cumsum(-np.sign(cum) * gaps)))
    half_range = 0.5 * (potential.max() - potential.min())
    return w1 / (1.0 + half_range)


def bl_distance_with_mode(mu: MeasureLike, nu: MeasureLike) -> BLDistance:
    """
    Bounded-Lipschitz distance and the method used to compute it.

    Exact LP (mode `exact-lp`) up to the configured point cap; above it a
    capped-W1 lower bound (mode `capped-w1`).
    """
    support, diff = _merged_difference(mu, nu)
    if np.all(np.abs(diff) <= 1e-15):
        return BLDistance(0.0, "exact-lp", len(support))
    cap = get_settings().quadrature.bl_max_points
    if len(support) <= cap:
        return BLDistance(_bl_linear_program(support, diff), "exact-lp", len(support))
    logger.warning("BL distance on %d points exceeds cap %d, using capped-W1", len(support), cap)
    return BLDistance(_capped_w1(support, diff), "capped-w1", len(support))


def bl_distance(mu: MeasureLike, nu: MeasureLike) -> float:
    """
    Bounded-Lipschitz distance sup { integral f d(mu - nu) : ||f||_inf + Lip(f) <= 1 }.

    Grid measures enter as atoms at cell midpoints; reference laws are
    discretized on the configured grid.

    Args:
        mu: EmpiricalMeasure, GridMeasure or ReferenceLaw
        nu: Same

    Returns:
        Nonnegative distance
    """
    return bl_distance_with_mode(mu, nu).value


def ks_distance(mu: Union[EmpiricalMeasure, GridMeasure], law: ReferenceLaw) -> float:
    """Sup distance between the CDF of mu and the CDF of a real law."""
    if isinstance(mu, EmpiricalMeasure):
        if mu.is_planar:
            raise UnsupportedError("KS distance is implemented for real measures only")
        x = mu.atoms
        ref = cdf(law, x)
        n = len(x)
        upper = np.arange(1, n + 1) / n
        lower = np.arange(0, n) / n
        return float(max(np.max(upper - ref), np.max(ref - lower)))
    if isinstance(mu, GridMeasure):
        own = np.concatenate(([0.0], np.cumsum(mu.cell_masses)))
        return float(np.max(np.abs(own - cdf(law, mu.nodes))))
    raise InvalidArgumentError(f"Unsupported measure type {type(mu).__name__}")


def ks_distance_samples(samples: np.ndarray, law: ReferenceLaw) -> float:
    """KS distance of a raw real sample to a reference law."""
    return ks_distance(EmpiricalMeasure(np.asarray(samples, dtype=float)), law)


def radial_ks_circular(values: np.ndarray) -> Tuple[float, float]:
    """
    Circular-law check on rescaled complex eigenvalues.

    Returns:
        (sup gap between the empirical CDF of |z|^2 and the uniform CDF on
        [0, 1], fraction of points with |z| <= 1)
    """
    z = np.asarray(values)
    if z.size == 0:
        raise InvalidArgumentError("Empty sample")
    r2 = np.sort(np.abs(z) ** 2)
    n = len(r2)
    ref = np.clip(r2, 0.0, 1.0)
    gap = max(np.max(np.arange(1, n + 1) / n - ref), np.max(ref - np.arange(0, n) / n))
    return float(gap), float(np.mean(np.abs(z) <= 1.0))
