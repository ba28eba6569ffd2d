"""
Monte Carlo Probes Around the Large Deviations

Diagnostic frequencies of BL deviations of GOE/GUE spectra, the closed-form
rate of the largest eigenvalue, the concentration variance of linear
statistics and largest-eigenvalue statistics.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.ensembles import eigenvalues_hermitian, sample_goe, sample_gue
from ..core.exceptions import InvalidArgumentError, UnsupportedError
from ..core.rng import RngStream
from ..measures.distances import bl_distance
from ..measures.empirical import empirical_from_spectrum
from ..measures.laws import ReferenceLaw
from ..measures.transforms import log_potential_semicircle
from ..utils.helpers import TrialRunner

logger = logging.getLogger(__name__)

SAMPLERS = {1: sample_goe, 2: sample_gue}


def _sampler(beta: float):
    if beta not in SAMPLERS:
        raise UnsupportedError(f"No eigenvalue sampler for beta={beta}, only 1 (GOE) and 2 (GUE)")
    return SAMPLERS[int(beta)]


def ldp_probe(
    beta: int,
    n: int,
    trials: int,
    epsilon: float,
    seed: int = 0,
    threads: Optional[int] = None,
) -> Tuple[float, int]:
    """
    Frequency of {bl_distance(ESD of X/sqrt(N), sigma_beta) >= epsilon}.

    Returns (1/N^2) log(count / trials) with -inf when no trial deviates,
    which is the usual outcome at reachable N.

    Returns:
        (log_freq_over_N2, count)
    """
    sampler = _sampler(beta)
    if trials < 1:
        raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
    if n < 1:
        raise InvalidArgumentError(f"N must be positive, got {n}")
    if not epsilon > 0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
    law = ReferenceLaw.semicircle_beta(beta)
    scale = 1.0 / math.sqrt(n)

    def trial(rng: RngStream) -> bool:
        spectrum = eigenvalues_hermitian(sampler(n, rng))
        return bl_distance(empirical_from_spectrum(spectrum, scale), law) >= epsilon

    count = int(sum(TrialRunner(seed, threads).run(trials, trial, desc="ldp probe")))
    if count == 0:
        logger.info("No deviation of size %g in %d trials at N=%d", epsilon, trials, n)
        return -math.inf, 0
    return math.log(count / trials) / n ** 2, count


def largest_eigenvalue_rate(x: float) -> float:
    """
    x^2/2 - int log|x - y| dsigma_1(y) - (log 2 + 1)/2 for x >= sqrt(2),
    +inf below. Zero at the edge and increasing beyond it.
    """
    x = float(x)
    if x < math.sqrt(2.0):
        return math.inf
    return 0.5 * x * x - log_potential_semicircle(x, 1.0) - 0.5 * (math.log(2.0) + 1.0)


def concentration_variance(n: int, trials: int, seed: int = 0, threads: Optional[int] = None) -> float:
    """Sample variance of (1/N) Tr(X/sqrt(N)) over GUE draws."""
    if trials < 2:
        raise InvalidArgumentError(f"Need at least two trials, got {trials}")

    def trial(rng: RngStream) -> float:
        return float(np.trace(sample_gue(n, rng).entries).real) / n ** 1.5

    values = np.asarray(TrialRunner(seed, threads).run(trials, trial, desc="linear statistic"))
    return float(np.var(values, ddof=1))


@dataclass(frozen=True)
class LargestEigenvalueStats:
    n: int
    trials: int
    mean: float
    std: float

    @property
    def gap_to_edge(self) -> float:
        return abs(2.0 - self.mean)

    def to_dict(self) -> dict:
        return {"n": self.n, "trials": self.trials, "mean": self.mean, "std": self.std, "gap_to_edge": self.gap_to_edge}


def largest_eigenvalue_stats(
    n: int, trials: int, seed: int = 0, threads: Optional[int] = None
) -> LargestEigenvalueStats:
    """Mean and spread of lambda_max / sqrt(n) over GUE draws."""
    if trials < 2:
        raise InvalidArgumentError(f"Need at least two trials, got {trials}")

    def trial(rng: RngStream) -> float:
        return float(eigenvalues_hermitian(sample_gue(n, rng)).values[-1]) / math.sqrt(n)

    values = np.asarray(TrialRunner(seed, threads).run(trials, trial, desc="largest eigenvalue"))
    return LargestEigenvalueStats(n, trials, float(values.mean()), float(values.std(ddof=1)))
