"""
Martingale Part of the Empirical Measure

For a test function f and a recorded trajectory, subtract the drift and
second-order terms of the Ito formula from <mu_N(t), f> and return the
remaining martingale path together with the bound on its bracket.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core.exceptions import InsufficientResolutionError, InvalidArgumentError, UnsupportedError
from .sde import ParticleState, TrajectoryRecord, drift

MIN_RECORDS = 100

ArrayFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TestFunction:
    """f with its first two derivatives and sup |f'|."""
    __test__ = False

    f: ArrayFunction
    df: ArrayFunction
    d2f: ArrayFunction
    df_sup: float

    @classmethod
    def constant(cls, c: float = 1.0) -> "TestFunction":
        return cls(
            lambda x: np.full_like(x, c), lambda x: np.zeros_like(x), lambda x: np.zeros_like(x), 0.0
        )

    @classmethod
    def identity(cls) -> "TestFunction":
        return cls(lambda x: x, lambda x: np.ones_like(x), lambda x: np.zeros_like(x), 1.0)

    @classmethod
    def log_one_plus_square(cls) -> "TestFunction":
        return cls(
            lambda x: np.log1p(x * x),
            lambda x: 2.0 * x / (1.0 + x * x),
            lambda x: 2.0 * (1.0 - x * x) / (1.0 + x * x) ** 2,
            1.0,
        )


@dataclass(frozen=True, eq=False)
class MartingaleResidual:
    times: np.ndarray
    path: np.ndarray
    bracket_bound: float


def martingale_residual(record: TrajectoryRecord, test: TestFunction) -> MartingaleResidual:
    """
    M_f(t) = <mu_N(t), f> - <mu_N(t_0), f>
             - int_{t_0}^t (1/N) sum_i [f'(x_i) b_i + (sigma^2 / 2) f''(x_i)] ds

    with the integral by the trapezoid rule over the record times, and

        bracket_bound = 2 (t - t_0) sup|f'|^2 / (beta N^2)

    in Dyson form (sigma^2 (t - t_0) sup|f'|^2 / N in general).

    Raises:
        InsufficientResolutionError: Fewer than 100 record times
        UnsupportedError: Wishart trajectories (position-dependent noise)
    """
    config = record.config
    if config.family == "wishart":
        raise UnsupportedError("Martingale residual needs a constant diffusion coefficient")
    times = np.asarray(record.times, dtype=float)
    if len(times) < MIN_RECORDS:
        raise InsufficientResolutionError(
            f"Need at least {MIN_RECORDS} record times, got {len(times)}"
        )
    if test.df_sup < 0:
        raise InvalidArgumentError("sup |f'| must be nonnegative")

    n = config.n
    sigma2 = float(config.diffusion(record.positions[0])[0] ** 2)
    observed = np.array([np.mean(test.f(x)) for x in record.positions])
    integrand = np.array([
        np.mean(test.df(x) * drift(ParticleState(float(t), x), config) + 0.5 * sigma2 * test.d2f(x))
        for t, x in zip(times, record.positions)
    ])
    compensator = np.concatenate(([0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(times))))
    path = observed - observed[0] - compensator
    bracket = sigma2 * (times[-1] - times[0]) * test.df_sup ** 2 / n
    return MartingaleResidual(times, path, float(bracket))
