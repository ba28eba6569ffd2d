"""
Hermite Polynomials

Probabilists' Hermite polynomials H_k (weight e^{-x^2/2}) by the three-term
recurrence, and the normalized functions

    h_k(x) = sqrt(gamma_H(x)) H_k(x) / sqrt(sqrt(2 pi) k!)

which are orthonormal under Lebesgue measure. The normalized recurrence runs
on H_k / sqrt(k!) with a separate log-scale carry, so no intermediate value
exceeds 1e100 up to degree 500 for |x| <= 50.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..core.exceptions import InvalidArgumentError, OverflowGuardError

RAW_MAX_DEGREE = 100
NORMALIZED_MAX_DEGREE = 500
RESCALE_THRESHOLD = 1e90

MODES = ("raw", "normalized")


def gamma_h(x):
    """Gaussian weight e^{-x^2/2}."""
    return np.exp(-0.5 * np.asarray(x, dtype=float) ** 2)


@dataclass(frozen=True)
class HermiteBasis:
    """
    Hermite functions up to `max_degree` in one evaluation mode.

    Attributes:
        max_degree: Highest degree evaluated
        mode: `raw` (H_k) or `normalized` (h_k)
    """
    max_degree: int
    mode: str = "normalized"

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidArgumentError(f"Unknown Hermite mode '{self.mode}', expected one of {MODES}")
        if self.max_degree < 0:
            raise InvalidArgumentError(f"Degree must be nonnegative, got {self.max_degree}")
        cap = RAW_MAX_DEGREE if self.mode == "raw" else NORMALIZED_MAX_DEGREE
        if self.max_degree > cap:
            raise OverflowGuardError(
                f"Degree {self.max_degree} exceeds the {self.mode} cap of {cap}"
            )

    def table(self, x) -> np.ndarray:
        """Values at x, shape (max_degree + 1,) + x.shape."""
        return self.table_with_peak(x)[0]

    def table_with_peak(self, x) -> Tuple[np.ndarray, float]:
        """
        Values at x and the largest magnitude carried by the recurrence.

        Args:
            x: Real point or array

        Returns:
            (table, peak) where table[k] is the degree-k value
        """
        xs = np.asarray(x, dtype=float)
        if self.mode == "raw":
            return _raw_table(self.max_degree, xs)
        return _normalized_table(self.max_degree, xs)


def _raw_table(max_degree: int, x: np.ndarray) -> Tuple[np.ndarray, float]:
    values = np.empty((max_degree + 1,) + x.shape)
    values[0] = 1.0
    if max_degree >= 1:
        values[1] = x
    for k in range(1, max_degree):
        values[k + 1] = x * values[k] - k * values[k - 1]
    return values, float(np.max(np.abs(values)))


def _normalized_table(max_degree: int, x: np.ndarray) -> Tuple[np.ndarray, float]:
    # p_k = H_k / sqrt(k!) satisfies p_{k+1} = (x p_k - sqrt(k) p_{k-1}) / sqrt(k+1);
    # the true value is p_k * exp(log_scale)
    values = np.empty((max_degree + 1,) + x.shape)
    log_scale = -0.25 * x * x - 0.25 * math.log(2.0 * math.pi)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    peak = 1.0
    values[0] = np.exp(log_scale)
    for k in range(max_degree):
        nxt = (x * cur - math.sqrt(k) * prev) / math.sqrt(k + 1)
        prev, cur = cur, nxt
        size = np.abs(cur)
        peak = max(peak, float(np.max(size)))
        big = size > RESCALE_THRESHOLD
        if np.any(big):
            factor = np.where(big, size, 1.0)
            prev = prev / factor
            cur = cur / factor
            log_scale = log_scale + np.log(factor)
        with np.errstate(over="ignore", under="ignore"):
            values[k + 1] = cur * np.exp(log_scale)
    return values, peak


def hermite(k: int, x: Union[float, np.ndarray], mode: str = "raw"):
    """
    Degree-k Hermite value at x.

    Args:
        k: Degree (raw: k <= 100, normalized: k <= 500)
        x: Real point or array
        mode: `raw` for H_k, `normalized` for h_k

    Returns:
        Value(s) at x

    Raises:
        OverflowGuardError: If k exceeds the cap for the mode
    """
    values = HermiteBasis(k, mode).table(x)[k]
    return float(values) if np.ndim(values) == 0 else values


def hermite_table(max_degree: int, x, mode: str = "normalized") -> np.ndarray:
    return HermiteBasis(max_degree, mode).table(x)
