"""
Interacting-Particle SDE Simulation

Dyson, generalized (alpha_N, beta_N), Ornstein-Uhlenbeck and Wishart particle
systems integrated by Euler-Maruyama with a regularized pair interaction,
ordering guard and Brownian-bridge step splitting.

Family parameters:
    dyson(beta):              dx_i = (1/N) sum 1/(x_i - x_j) dt + sqrt(2/(beta N)) dB_i
    generalized(alpha, bN):   dx_i = (alpha/N^2) sum 1/(x_i - x_j) dt + 2 sqrt(alpha/bN) dB_i
    ou(theta):                dyson(1) drift - theta x_i dt
    wishart(M):               dx_i = ((1/N) sum (x_i + x_j)/(x_i - x_j) + M/N) dt + sqrt(2 x_i/N) dB_i

dyson(beta) is generalized(alpha=N, beta_N=2 beta N^2).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..config.settings import get_settings
from ..core.ensembles import Spectrum, eigenvalues_hermitian, sample_goe, sample_gue, sample_wishart
from ..core.exceptions import (
    CollisionAbortError,
    InvalidArgumentError,
    SingularConfigurationError,
    UnsupportedError,
)
from ..core.rng import RngStream

logger = logging.getLogger(__name__)

FAMILIES = ("dyson", "generalized", "ou", "wishart")
ZERO_START = "zero-start"


@dataclass(frozen=True)
class SdeConfig:
    """
    Particle system and integration window.

    Attributes:
        family: dyson, generalized, ou or wishart
        n: Number of particles
        dt_max: Largest step
        t_end: Final time
        record_times: Sorted recording times in (0, t_end] (default: t_end only)
        beta: Dyson symmetry class (1 or 2)
        alpha, beta_n: Generalized-system coefficients
        theta: OU confinement strength
        m: Wishart sample count (m >= n)
        ordering_guard: Reject steps that break strict ordering
    """
    family: str
    n: int
    dt_max: float = 1e-3
    t_end: float = 1.0
    record_times: Tuple[float, ...] = ()
    beta: Optional[int] = None
    alpha: Optional[float] = None
    beta_n: Optional[float] = None
    theta: Optional[float] = None
    m: Optional[int] = None
    ordering_guard: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f"Unknown SDE family '{self.family}'")
        if self.n < 1:
            raise InvalidArgumentError(f"n must be positive, got {self.n}")
        if not self.dt_max > 0 or not self.t_end > 0:
            raise InvalidArgumentError("dt_max and t_end must be positive")
        if self.family == "dyson" and self.beta not in (1, 2):
            raise InvalidArgumentError(f"Dyson family needs beta in {{1, 2}}, got {self.beta}")
        if self.family == "generalized" and not (
            self.alpha is not None and self.alpha > 0 and self.beta_n is not None and self.beta_n > 0
        ):
            raise InvalidArgumentError("Generalized family needs alpha > 0 and beta_n > 0")
        if self.family == "ou" and not (self.theta is not None and self.theta > 0):
            raise InvalidArgumentError("OU family needs theta > 0")
        if self.family == "wishart" and not (self.m is not None and self.m >= self.n):
            raise InvalidArgumentError(f"Wishart family needs m >= n, got m={self.m}, n={self.n}")

        times = tuple(float(t) for t in self.record_times) or (float(self.t_end),)
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise InvalidArgumentError("record_times must be strictly increasing")
        if times[0] <= 0 or times[-1] > self.t_end:
            raise InvalidArgumentError("record_times must lie in (0, t_end]")
        object.__setattr__(self, "record_times", times)

    @classmethod
    def dyson(cls, n: int, beta: int = 2, **kwargs) -> "SdeConfig":
        return cls("dyson", n, beta=beta, **kwargs)

    @classmethod
    def generalized(cls, n: int, alpha: float, beta_n: float, **kwargs) -> "SdeConfig":
        return cls("generalized", n, alpha=alpha, beta_n=beta_n, **kwargs)

    @classmethod
    def ou(cls, n: int, theta: float, **kwargs) -> "SdeConfig":
        return cls("ou", n, theta=theta, **kwargs)

    @classmethod
    def wishart(cls, n: int, m: int, **kwargs) -> "SdeConfig":
        return cls("wishart", n, m=m, **kwargs)

    @property
    def alpha_n(self) -> float:
        if self.family == "generalized":
            return float(self.alpha)
        if self.family == "wishart":
            raise UnsupportedError("Wishart particles have no (alpha_N, beta_N) form")
        return float(self.n)

    @property
    def beta_n_value(self) -> float:
        if self.family == "generalized":
            return float(self.beta_n)
        if self.family == "dyson":
            return 2.0 * self.beta * self.n ** 2
        if self.family == "ou":
            return 2.0 * self.n ** 2
        raise UnsupportedError("Wishart particles have no (alpha_N, beta_N) form")

    @property
    def effective_beta(self) -> float:
        """Symmetry parameter beta_N / (2 N^2) of the equivalent Dyson system."""
        return self.beta_n_value / (2.0 * self.n ** 2)

    @property
    def interaction(self) -> float:
        """Coefficient c of c * sum 1/(x_i - x_j) in the drift."""
        if self.family == "wishart":
            return 1.0 / self.n
        return self.alpha_n / self.n ** 2

    def diffusion(self, positions: np.ndarray) -> np.ndarray:
        """Noise coefficient sigma_i in dx_i = ... + sigma_i dB_i."""
        if self.family == "wishart":
            return np.sqrt(2.0 * np.clip(positions, 0.0, None) / self.n)
        sigma = 2.0 * math.sqrt(self.alpha_n / self.beta_n_value)
        return np.full(len(positions), sigma)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "dt_max": self.dt_max,
            "t_end": self.t_end,
            "record_times": list(self.record_times),
            "beta": self.beta,
            "alpha": self.alpha,
            "beta_n": self.beta_n,
            "theta": self.theta,
            "m": self.m,
            "ordering_guard": self.ordering_guard,
        }


@dataclass(frozen=True, eq=False)
class ParticleState:
    t: float
    positions: np.ndarray

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        if positions.ndim != 1 or positions.size == 0:
            raise InvalidArgumentError("Particle positions must be a nonempty 1-D array")
        object.__setattr__(self, "positions", positions)

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def min_gap(self) -> float:
        if self.n < 2:
            return math.inf
        return float(np.min(np.diff(self.positions)))

    def is_ordered(self) -> bool:
        return self.n < 2 or bool(np.all(np.diff(self.positions) > 0))


@dataclass
class TrajectoryDiagnostics:
    min_gap: float = math.inf
    rejections: int = 0
    steps: int = 0
    energy: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "min_gap": self.min_gap,
            "rejections": self.rejections,
            "steps": self.steps,
            "energy": list(self.energy),
        }


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """States of one trajectory at the configured record times."""
    config: SdeConfig
    times: np.ndarray
    positions: np.ndarray
    diagnostics: TrajectoryDiagnostics
    start: ParticleState

    def state(self, k: int) -> ParticleState:
        return ParticleState(float(self.times[k]), self.positions[k])

    @property
    def final(self) -> ParticleState:
        return self.state(len(self.times) - 1)

    def to_frame(self) -> pd.DataFrame:
        """Long table with columns t, i, position."""
        n_times, n = self.positions.shape
        return pd.DataFrame({
            "t": np.repeat(self.times, n),
            "i": np.tile(np.arange(n), n_times),
            "position": self.positions.reshape(-1),
        })


def _pair_differences(x: np.ndarray) -> np.ndarray:
    return x[:, np.newaxis] - x[np.newaxis, :]


def containment_energy_terms(x: np.ndarray) -> Tuple[float, float]:
    """
    (E_V, E_W) with E_V = (1/N) sum x_i^2 and
    E_W = (1/2N^2) sum_{i != j} -log((x_i - x_j)^2).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    e_v = float(np.dot(x, x) / n)
    if n < 2:
        return e_v, 0.0
    i, j = np.triu_indices(n, k=1)
    gaps = np.abs(x[j] - x[i])
    with np.errstate(divide="ignore"):
        e_w = float(-2.0 * np.sum(np.log(gaps)) / n ** 2)
    return e_v, e_w


def check_distinct(x: np.ndarray) -> None:
    if len(x) > 1 and np.min(np.diff(np.sort(x))) == 0:
        raise SingularConfigurationError("Coincident particles: the interaction is singular")


def drift(state: ParticleState, config: SdeConfig) -> np.ndarray:
    """
    Exact drift of the configured family.

    Pair terms are antisymmetric, so each pair i < j of the sorted positions
    is evaluated once and accumulated into both particles.

    Raises:
        SingularConfigurationError: If two particles coincide
    """
    x = state.positions
    check_distinct(x)
    result = config.interaction * _sorted_pair_sums(x, config.family == "wishart")
    if config.family == "ou":
        result = result - config.theta * x
    elif config.family == "wishart":
        result = result + config.m / config.n
    return result


def _sorted_pair_sums(x: np.ndarray, wishart: bool) -> np.ndarray:
    # sum_j 1/(x_i - x_j), or sum_j (x_i + x_j)/(x_i - x_j)
    n = len(x)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    lower, upper = np.triu_indices(n, k=1)
    terms = 1.0 / (xs[lower] - xs[upper])
    if wishart:
        terms = terms * (xs[lower] + xs[upper])
    sums = np.bincount(lower, weights=terms, minlength=n) - np.bincount(upper, weights=terms, minlength=n)
    result = np.empty(n)
    result[order] = sums
    return result


def drift_reference(state: ParticleState, config: SdeConfig) -> np.ndarray:
    """Pair-by-pair loop evaluation of `drift`, kept as the reference."""
    x = state.positions
    check_distinct(x)
    n = len(x)
    result = np.zeros(n)
    for i in range(n):
        total = 0.0
        for j in range(n):
            if j == i:
                continue
            if config.family == "wishart":
                total += (x[i] + x[j]) / (x[i] - x[j])
            else:
                total += 1.0 / (x[i] - x[j])
        result[i] = config.interaction * total
        if config.family == "ou":
            result[i] -= config.theta * x[i]
        elif config.family == "wishart":
            result[i] += config.m / config.n
    return result


def regularized_drift(state: ParticleState, config: SdeConfig) -> np.ndarray:
    """Drift with each pair term 1/(x_i - x_j) capped at 1/eps_reg in size."""
    eps = get_settings().simulation.eps_reg
    x = state.positions
    diff = _pair_differences(x)
    size = np.maximum(np.abs(diff), eps)
    inverse = np.sign(diff) / size
    np.fill_diagonal(inverse, 0.0)
    return _assemble_drift(x, inverse, config)


def _assemble_drift(x: np.ndarray, inverse: np.ndarray, config: SdeConfig) -> np.ndarray:
    if config.family == "wishart":
        pair = (x[:, np.newaxis] + x[np.newaxis, :]) * inverse
        return config.interaction * pair.sum(axis=1) + config.m / config.n
    result = config.interaction * inverse.sum(axis=1)
    if config.family == "ou":
        result = result - config.theta * x
    return result


def _admissible(positions: np.ndarray, config: SdeConfig) -> bool:
    if not np.all(np.isfinite(positions)):
        return False
    if config.family == "wishart" and positions[0] < 0:
        return False
    if config.ordering_guard and len(positions) > 1:
        return bool(np.all(np.diff(positions) > 0))
    return True


def _euler(state: ParticleState, dt: float, increment: np.ndarray, config: SdeConfig) -> np.ndarray:
    x = state.positions
    return x + regularized_drift(state, config) * dt + config.diffusion(x) * increment


def _step_with_stats(
    state: ParticleState,
    dt: float,
    config: SdeConfig,
    rng: RngStream,
    increment: Optional[np.ndarray] = None,
    noiseless: bool = False,
) -> Tuple[ParticleState, int]:
    max_halvings = get_settings().simulation.max_halvings
    n = state.n
    if increment is None:
        increment = np.zeros(n) if noiseless else np.asarray(rng.normal(0.0, math.sqrt(dt), n), dtype=float)

    current = state
    rejections = 0
    # pending sub-steps (dt, Brownian increment, depth), earliest first
    pending = [(dt, np.asarray(increment, dtype=float), 0)]
    while pending:
        sub_dt, sub_db, depth = pending.pop(0)
        proposed = _euler(current, sub_dt, sub_db, config)
        if _admissible(proposed, config):
            current = ParticleState(current.t + sub_dt, proposed)
            continue
        rejections += 1
        if depth >= max_halvings:
            logger.warning("Collision abort at t=%g after %d halvings", current.t, depth)
            raise CollisionAbortError(
                f"Ordering could not be kept at t={current.t:.6g} after {max_halvings} halvings",
                state=current,
            )
        # Brownian bridge midpoint keeps the total increment fixed
        xi = np.zeros(n) if noiseless else np.asarray(rng.standard_normal(n), dtype=float)
        first = 0.5 * sub_db + math.sqrt(sub_dt / 4.0) * xi
        pending[:0] = [(sub_dt / 2.0, first, depth + 1), (sub_dt / 2.0, sub_db - first, depth + 1)]
    return current, rejections


def step(
    state: ParticleState,
    dt: float,
    config: SdeConfig,
    rng: RngStream,
    increment: Optional[np.ndarray] = None,
    noiseless: bool = False,
) -> ParticleState:
    """
    One Euler-Maruyama step of length dt with ordering guard.

    A rejected proposal is split into two half steps whose Brownian
    increments are drawn from the bridge conditioned on the original
    increment, recursively up to max_halvings levels.

    Args:
        state: Current state
        dt: Step length, at most config.dt_max
        config: Particle system
        rng: Random stream for increments and bridge midpoints
        increment: Optional Brownian increment (N values with variance dt)
        noiseless: Use zero noise

    Returns:
        State at t + dt

    Raises:
        CollisionAbortError: If max_halvings levels were exhausted
    """
    if not 0 < dt <= config.dt_max * (1.0 + 1e-12):
        raise InvalidArgumentError(f"dt must be in (0, dt_max={config.dt_max}], got {dt}")
    return _step_with_stats(state, dt, config, rng, increment, noiseless)[0]


def _gaussian_spectrum(n: int, beta: float, rng: RngStream) -> Spectrum:
    # GUE/GOE eigenvalue density is proportional to |Delta|^beta exp(-|x|^2/2)
    if math.isclose(beta, 2.0):
        return eigenvalues_hermitian(sample_gue(n, rng))
    if math.isclose(beta, 1.0):
        return eigenvalues_hermitian(sample_goe(n, rng))
    raise UnsupportedError(f"Zero start needs an effective beta of 1 or 2, got {beta:g}")


def zero_start_state(config: SdeConfig, t0: float, rng: RngStream) -> ParticleState:
    """
    Exact law at time t0 of the system started with every particle at 0.

    Dyson-type systems: sqrt(2 tau / (beta_eff N)) times the eigenvalues of
    one GUE (beta_eff = 2) or GOE (beta_eff = 1) draw, with tau = alpha t0 / N
    (OU: the Mehler time (1 - e^{-2 theta t0}) / (2 theta)).
    Wishart: eigenvalues of (t0/N) A A*.

    Raises:
        UnsupportedError: If a generalized system has beta_N / (2 N^2) outside {1, 2}
    """
    n = config.n
    if config.family == "wishart":
        w = sample_wishart(n, config.m, rng).entries * (t0 * config.m / n)
        values = np.sort(np.linalg.eigvalsh(w))
        return ParticleState(t0, np.clip(values, 0.0, None))

    tau = config.alpha_n * t0 / n
    if config.family == "ou":
        tau = -math.expm1(-2.0 * config.theta * t0) / (2.0 * config.theta)
    beta_eff = config.effective_beta
    spectrum = _gaussian_spectrum(n, beta_eff, rng).rescaled(math.sqrt(2.0 * tau / (beta_eff * n)))
    return ParticleState(t0, spectrum.values)


def _adaptive_dt(state: ParticleState, config: SdeConfig) -> float:
    if state.n < 2:
        return config.dt_max
    safety = get_settings().simulation.step_safety
    gap = state.min_gap
    b = np.max(np.abs(regularized_drift(state, config)))
    sigma = np.max(config.diffusion(state.positions))
    dt = config.dt_max
    if b > 0:
        dt = min(dt, safety * gap / b)
    if sigma > 0:
        dt = min(dt, (safety * gap / sigma) ** 2)
    return max(dt, config.dt_max * 1e-9)


def simulate(
    config: SdeConfig,
    rng: RngStream,
    initial: Union[ParticleState, Sequence[float], str] = ZERO_START,
    noiseless: bool = False,
    show_progress: bool = False,
) -> TrajectoryRecord:
    """
    Integrate the particle system up to t_end, recording at record_times.

    Steps shrink with the minimum gap (step_safety fraction) and never
    exceed dt_max. A zero start draws the exact law at
    t0 = bootstrap_fraction * dt_max and integrates from there.

    Args:
        config: Particle system and time window
        rng: Random stream
        initial: ParticleState, ordered positions (t=0) or "zero-start"
        noiseless: Deterministic drift-only run
        show_progress: tqdm bar over record times

    Returns:
        TrajectoryRecord
    """
    sim = get_settings().simulation
    if isinstance(initial, str):
        if initial != ZERO_START:
            raise InvalidArgumentError(f"Unknown initial condition '{initial}'")
        state = zero_start_state(config, sim.bootstrap_fraction * config.dt_max, rng)
    elif isinstance(initial, ParticleState):
        state = initial
    else:
        state = ParticleState(0.0, np.asarray(initial, dtype=float))
    if state.n != config.n:
        raise InvalidArgumentError(f"Initial state has {state.n} particles, config has {config.n}")
    if config.ordering_guard and not state.is_ordered():
        raise InvalidArgumentError("Initial positions must be strictly increasing")
    if config.record_times[0] < state.t:
        raise InvalidArgumentError(f"First record time {config.record_times[0]} precedes the start {state.t}")

    start = state
    diagnostics = TrajectoryDiagnostics(min_gap=state.min_gap)
    records = np.empty((len(config.record_times), config.n))
    targets = config.record_times
    iterator = tqdm(targets, desc=f"{config.family} N={config.n}", disable=not show_progress)
    for k, target in enumerate(iterator):
        while state.t < target:
            dt = min(_adaptive_dt(state, config), target - state.t)
            state, rejected = _step_with_stats(state, dt, config, rng, noiseless=noiseless)
            if target - state.t <= 1e-12 * max(1.0, target):
                state = ParticleState(target, state.positions)
            diagnostics.steps += 1
            diagnostics.rejections += rejected
            diagnostics.min_gap = min(diagnostics.min_gap, state.min_gap)
        records[k] = state.positions
        diagnostics.energy.append(sum(containment_energy_terms(state.positions)))

    logger.debug(
        "Simulated %s N=%d to t=%g: %d steps, %d rejections, min gap %.3g",
        config.family, config.n, config.t_end, diagnostics.steps, diagnostics.rejections, diagnostics.min_gap,
    )
    return TrajectoryRecord(config, np.asarray(targets, dtype=float), records, diagnostics, start)


def collision_frequency(
    config: SdeConfig,
    trials: int,
    seed: int,
    initial: Union[ParticleState, Sequence[float], str] = ZERO_START,
) -> float:
    """Fraction of trials ending in a collision abort (diagnostic only)."""
    if trials < 1:
        raise InvalidArgumentError(f"trials must be positive, got {trials}")
    aborts = 0
    for i in range(trials):
        try:
            simulate(config, RngStream(seed, i), initial)
        except CollisionAbortError:
            aborts += 1
    return aborts / trials
