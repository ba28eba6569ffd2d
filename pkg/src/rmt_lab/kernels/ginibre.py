"""
Ginibre Determinantal Structure

One-point density and kernels of the complex Ginibre ensemble (weight
gamma(z) = e^{-|z|^2} / pi), the truncated exponential series behind the
circular law, the exact sampler for eigenvalue moduli, hole probabilities of
the infinite ensemble, and the spectral-radius Gumbel rescaling.

Every e^{-|z|^2} sum_l |z|^{2l} / l! product goes through the regularized
upper incomplete gamma Q(N, |z|^2) = P[Poisson(|z|^2) <= N - 1].
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import special

from ..core.exceptions import (
    EdgeDegenerateError,
    InvalidArgumentError,
    KappaUndefinedError,
    TruncationError,
)
from ..core.rng import RngStream

logger = logging.getLogger(__name__)

EDGE_BAND = 1e-6


def log_poisson_cdf(k_max: int, mean: float) -> float:
    """log P[Poisson(mean) <= k_max], by logsumexp over the probability masses."""
    if k_max < 0:
        return -math.inf
    if mean == 0:
        return 0.0
    j = np.arange(k_max + 1)
    log_masses = j * math.log(mean) - mean - special.gammaln(j + 1)
    return float(min(0.0, special.logsumexp(log_masses)))


def log_upper_gamma_q(k: int, x: float) -> float:
    """
    log Q(k, x) for integer k >= 1 and x >= 0.

    Falls back to the Poisson sum when scipy's Q underflows.
    """
    q = special.gammaincc(k, x)
    if q > 1e-300:
        return math.log(q)
    return log_poisson_cdf(k - 1, x)


def ginibre_density1(n: int, z: Union[complex, np.ndarray]):
    """
    One-point density of the Ginibre eigenvalues, Q(N, |z|^2) / (pi N).

    Args:
        n: Matrix size
        z: Complex point(s)

    Returns:
        Density value(s), integrating to 1 over the plane
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    r2 = np.abs(np.asarray(z)) ** 2
    value = special.gammaincc(n, r2) / (math.pi * n)
    return float(value) if np.ndim(value) == 0 else value


def _log_truncated_exp_terms(u: complex, start: int, stop: int) -> np.ndarray:
    l = np.arange(start, stop)
    return l * np.log(complex(u)) - special.gammaln(l + 1)


def _log_abs_sum(log_terms: np.ndarray) -> float:
    shift = np.max(log_terms.real)
    total = np.sum(np.exp(log_terms - shift))
    magnitude = abs(total)
    return -math.inf if magnitude == 0 else shift + math.log(magnitude)


def ginibre_kernel(n: int, z: complex, w: complex) -> complex:
    """
    Finite-N Ginibre kernel (1/pi) e^{-(|z|^2 + |w|^2)/2} sum_{l<N} (z conj(w))^l / l!.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    z, w = complex(z), complex(w)
    u = z * w.conjugate()
    half = 0.5 * (abs(z) ** 2 + abs(w) ** 2)
    if u == 0:
        return complex(math.exp(-half) / math.pi)
    log_terms = _log_truncated_exp_terms(u, 0, n) - half
    return complex(np.sum(np.exp(log_terms)) / math.pi)


def ginibre_infinite_kernel(z: complex, w: complex) -> complex:
    """Infinite Ginibre kernel exp(z conj(w) - |z|^2/2 - |w|^2/2) / pi."""
    z, w = complex(z), complex(w)
    return complex(np.exp(z * w.conjugate() - 0.5 * abs(z) ** 2 - 0.5 * abs(w) ** 2) / math.pi)


@dataclass(frozen=True)
class TruncatedExpGap:
    """
    Gap |e_N(Nz) - e^{Nz} 1{|z|<=1}| against its bound r_N(z).

    `scaled_*` fields carry the factor e^{-N|z|}.
    """
    n: int
    z: complex
    log_gap: float
    log_bound: float

    @property
    def gap(self) -> float:
        return _safe_exp(self.log_gap)

    @property
    def bound(self) -> float:
        return _safe_exp(self.log_bound)

    @property
    def scaled_gap(self) -> float:
        return _safe_exp(self.log_gap - self.n * abs(self.z))

    @property
    def scaled_bound(self) -> float:
        return _safe_exp(self.log_bound - self.n * abs(self.z))

    @property
    def within_bound(self) -> bool:
        return self.log_gap <= self.log_bound


def _safe_exp(value: float) -> float:
    if value == -math.inf:
        return 0.0
    if value > 709.0:
        return math.inf
    return math.exp(value)


def truncated_exp_gap(n: int, z: complex) -> TruncatedExpGap:
    """
    Distance between the truncated exponential e_N(Nz) = sum_{l<N} (Nz)^l / l!
    and e^{Nz} inside the unit disk (0 outside), with the Stirling-type bound

        r_N(z) = e^N |z|^N / sqrt(2 pi N) * ((N+1) / (N(1-|z|) + 1)   if |z| <= 1
                                             N / (N(|z|-1) + 1)       if |z| > 1)

    Inside the disk the gap is the series tail, outside it is the partial sum;
    both are summed in log space.

    Raises:
        EdgeDegenerateError: If |z| is within 1e-6 of 1
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    z = complex(z)
    modulus = abs(z)
    if abs(modulus - 1.0) <= EDGE_BAND:
        raise EdgeDegenerateError(f"|z| = {modulus} is inside the edge band around the unit circle")
    if modulus == 0:
        return TruncatedExpGap(n, z, -math.inf, -math.inf)

    u = n * z
    if modulus < 1.0:
        # terms decay geometrically beyond l = N with ratio N|z| / (l+1) < |z|
        extra = int(math.ceil(40.0 / max(-math.log(modulus), 1e-3))) + 20
        log_gap = _log_abs_sum(_log_truncated_exp_terms(u, n, n + extra))
        factor = (n + 1) / (n * (1.0 - modulus) + 1.0)
    else:
        log_gap = _log_abs_sum(_log_truncated_exp_terms(u, 0, n))
        factor = n / (n * (modulus - 1.0) + 1.0)

    log_bound = n + n * math.log(modulus) - 0.5 * math.log(2.0 * math.pi * n) + math.log(factor)
    return TruncatedExpGap(n, z, float(log_gap), float(log_bound))


def sample_ginibre_moduli(n: int, rng: RngStream) -> np.ndarray:
    """
    Moduli of the N Ginibre eigenvalues in law: Z_k = sqrt(Gamma(k, 1)),
    independent over k = 1..N, then uniformly permuted.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    squares = rng.gamma(np.arange(1, n + 1, dtype=float), 1.0, n)
    return rng.permutation(np.sqrt(np.asarray(squares, dtype=float)))


def default_hole_truncation(r: float) -> int:
    return int(math.ceil(4.0 * r * r)) + 50


def hole_probability(r: float, truncation: Optional[int] = None) -> Tuple[float, float]:
    """
    Log-probability that the infinite Ginibre ensemble has no point in the
    disk of radius r: sum_{k<=K} log Q(k, r^2), the moduli being independent
    with Z_k^2 ~ Gamma(k, 1).

    The neglected terms k > K satisfy P(Gamma(k) <= r^2) <= exp(-k h(r^2/k))
    with h(u) = u - 1 - log u, which bounds their sum by a geometric series.

    Args:
        r: Disk radius
        truncation: K, at least 2 r^2 (default ceil(4 r^2) + 50)

    Returns:
        (log_prob, tail_bound)
    """
    if not r > 0:
        raise InvalidArgumentError(f"Radius must be positive, got {r}")
    x = r * r
    k_max = default_hole_truncation(r) if truncation is None else int(truncation)
    if k_max < 2.0 * x or k_max < 1:
        raise TruncationError(f"Truncation {k_max} is below 2 r^2 = {2.0 * x}")

    log_prob = math.fsum(log_upper_gamma_q(k, x) for k in range(1, k_max + 1))

    ratio = x / (k_max + 1)
    rate = ratio - 1.0 - math.log(ratio)
    q = math.exp(-rate)
    head = q ** (k_max + 1)
    tail_sum = head / (1.0 - q)
    tail_bound = tail_sum / (1.0 - head)
    logger.debug("Hole probability r=%g K=%d log_prob=%.6g tail<=%.3g", r, k_max, log_prob, tail_bound)
    return log_prob, tail_bound


@dataclass(frozen=True)
class GumbelRescale:
    """
    Affine normalization of the Ginibre spectral radius rho_N.

    kappa_N = log(N / 2 pi) - 2 log log N, positive from N = 164 on.
    """
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise KappaUndefinedError(f"kappa_N is undefined for N = {self.n}")
        if self.kappa <= 0:
            raise KappaUndefinedError(f"kappa_N = {self.kappa:.4f} <= 0 for N = {self.n}")

    @property
    def kappa(self) -> float:
        return math.log(self.n / (2.0 * math.pi)) - 2.0 * math.log(math.log(self.n))

    @property
    def center(self) -> float:
        return 1.0 + math.sqrt(self.kappa / (4.0 * self.n))

    @property
    def scale(self) -> float:
        return math.sqrt(4.0 * self.n * self.kappa)

    def apply(self, rho):
        return self.scale * (np.asarray(rho, dtype=float) - self.center)


def gumbel_rescale(rho: Union[float, np.ndarray], n: int):
    """
    sqrt(4 N kappa_N) (rho - 1 - sqrt(kappa_N / 4N)), converging in law to
    the Gumbel distribution when rho is the spectral radius of a Ginibre
    matrix divided by sqrt(N).
    """
    value = GumbelRescale(n).apply(rho)
    return float(value) if np.ndim(value) == 0 else value


def sample_spectral_radius(n: int, rng: RngStream) -> float:
    """max_k Z_k / sqrt(N) from the moduli sampler."""
    return float(np.max(sample_ginibre_moduli(n, rng)) / math.sqrt(n))
