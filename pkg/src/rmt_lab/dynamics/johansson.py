"""
Johansson Transition Density and Vandermonde Identities

Density at time t of the Dyson beta=2 eigenvalues of H_0 + B_t (B_t a GUE
Brownian matrix with unit entry variance), from a fixed ordered start or from
zero, evaluated in log space.
"""

import math
from typing import Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import InvalidArgumentError, UnsupportedError
from ..kernels.dpp import log_superfactorial, log_vandermonde

MAX_JOHANSSON_SIZE = 10
MAX_VANDERMONDE_SIZE = 12


def _signed_vandermonde(x: np.ndarray) -> Tuple[float, float]:
    """(sign, log|.|) of prod_{i<j} (x_j - x_i)."""
    i, j = np.triu_indices(len(x), k=1)
    diff = x[j] - x[i]
    if np.any(diff == 0):
        return 0.0, -math.inf
    sign = float(np.prod(np.sign(diff)))
    return sign, float(np.sum(np.log(np.abs(diff))))


def johansson_density(
    n: int,
    t: float,
    lambda0: Union[Sequence[float], str],
    values: Sequence[float],
) -> float:
    """
    Transition density rho(t, lambda) of the unordered eigenvalues.

    From an ordered start lambda0:

        rho = Delta(lambda) / Delta(lambda0) det[exp(-(lambda_i - lambda0_j)^2 / 2t)]
              / (N! (2 pi t)^{N/2})

    From zero ("zero" or an all-zero vector):

        rho = exp(-|lambda|^2 / 2t) Delta(lambda) Delta(lambda / t)
              / ((2 pi t)^{N/2} 1! 2! ... N!)

    Args:
        n: Number of particles, at most 10
        t: Positive time
        lambda0: Strictly increasing start, or "zero"
        values: Evaluation point (N values)

    Returns:
        Nonnegative density value
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    if n > MAX_JOHANSSON_SIZE:
        raise UnsupportedError(f"Johansson density is limited to N <= {MAX_JOHANSSON_SIZE}")
    if not t > 0:
        raise InvalidArgumentError(f"t must be positive, got {t}")
    lam = np.asarray(values, dtype=float)
    if lam.shape != (n,):
        raise InvalidArgumentError(f"Expected {n} evaluation values, got shape {lam.shape}")

    zero_start = isinstance(lambda0, str)
    if zero_start:
        if lambda0 != "zero":
            raise InvalidArgumentError(f"Unknown start '{lambda0}'")
    else:
        start = np.asarray(lambda0, dtype=float)
        if start.shape != (n,):
            raise InvalidArgumentError(f"Expected {n} start values, got shape {start.shape}")
        zero_start = bool(np.all(start == 0.0))

    if zero_start:
        log_delta = log_vandermonde(lam)
        if log_delta == -math.inf:
            return 0.0
        n_pairs = n * (n - 1) / 2.0
        log_value = (
            -float(np.dot(lam, lam)) / (2.0 * t)
            + 2.0 * log_delta - n_pairs * math.log(t)
            - 0.5 * n * math.log(2.0 * math.pi * t)
            - log_superfactorial(n)
        )
        return math.exp(log_value)

    if n > 1 and np.any(np.diff(start) <= 0):
        raise InvalidArgumentError("lambda0 must be strictly increasing (or exactly zero)")
    sign_l, log_l = _signed_vandermonde(lam)
    if sign_l == 0:
        return 0.0
    _, log_l0 = _signed_vandermonde(start)

    exponent = -((lam[:, np.newaxis] - start[np.newaxis, :]) ** 2) / (2.0 * t)
    row_max = exponent.max(axis=1, keepdims=True)
    sign_d, log_det = np.linalg.slogdet(np.exp(exponent - row_max))
    if sign_d == 0:
        return 0.0
    log_det += float(row_max.sum())

    log_value = log_l - log_l0 + log_det - math.lgamma(n + 1) - 0.5 * n * math.log(2.0 * math.pi * t)
    return max(0.0, sign_l * float(sign_d) * math.exp(log_value))


def vandermonde(values: Sequence[float]) -> float:
    """prod_{i<j} (x_j - x_i)."""
    sign, log_abs = _signed_vandermonde(np.asarray(values, dtype=float))
    return 0.0 if sign == 0 else sign * math.exp(log_abs)


def vandermonde_gradient(values: Sequence[float]) -> np.ndarray:
    """d Delta / d x_i = Delta * sum_{j != i} 1 / (x_i - x_j)."""
    x = np.asarray(values, dtype=float)
    diff = x[:, np.newaxis] - x[np.newaxis, :]
    np.fill_diagonal(diff, np.inf)
    return vandermonde(x) * np.sum(1.0 / diff, axis=1)


def vandermonde_and_harmonicity(values: Sequence[float], h: float = 1e-4) -> Tuple[float, float]:
    """
    Vandermonde product and a central-difference estimate of its Laplacian,
    which vanishes identically.

    Args:
        values: Up to 12 points
        h: Difference step

    Returns:
        (Delta_N, laplacian_fd)
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidArgumentError("Expected a nonempty 1-D point list")
    if len(x) > MAX_VANDERMONDE_SIZE:
        raise UnsupportedError(f"Vandermonde checks are limited to N <= {MAX_VANDERMONDE_SIZE}")
    center = vandermonde(x)
    laplacian = 0.0
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        laplacian += (vandermonde(x + e) - 2.0 * center + vandermonde(x - e)) / (h * h)
    return center, float(laplacian)
