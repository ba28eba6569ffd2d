"""
Reference Laws

Limit laws of the lab: semicircles (standard, beta-scaled, OU stationary),
Marchenko-Pastur, the circular law and the Gumbel law. Densities, atoms,
CDFs, moments and Catalan numbers.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

import numpy as np
from scipy import integrate

from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError, UnsupportedError, UnsupportedOrderError

MAX_MOMENT_ORDER = 30

SEMICIRCLE_KINDS = ("semicircle", "semicircle_beta", "ou_limit")
LAW_KINDS = SEMICIRCLE_KINDS + ("marchenko_pastur", "circular", "gumbel")


@dataclass(frozen=True)
class ReferenceLaw:
    """
    A named limit law with its parameters.

    Kinds and parameters:
        semicircle: radius (default 2)
        semicircle_beta: beta, radius sqrt(2 beta)
        ou_limit: theta, radius sqrt(2 / theta)
        marchenko_pastur: c (ratio n/m), atom (1 - 1/c)_+ at 0
        circular: uniform on the unit disk
        gumbel: density exp(-x - exp(-x))
    """
    kind: str
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise InvalidArgumentError(f"Unknown law kind '{self.kind}'")
        for name, value in self.params.items():
            if not value > 0:
                raise InvalidArgumentError(f"Law parameter {name} must be positive, got {value}")
        required = {"semicircle_beta": "beta", "ou_limit": "theta", "marchenko_pastur": "c"}
        if self.kind in required and required[self.kind] not in self.params:
            raise InvalidArgumentError(f"{self.kind} requires parameter '{required[self.kind]}'")

    @classmethod
    def semicircle(cls, radius: float = 2.0) -> "ReferenceLaw":
        return cls("semicircle", {"radius": float(radius)})

    @classmethod
    def semicircle_beta(cls, beta: float) -> "ReferenceLaw":
        return cls("semicircle_beta", {"beta": float(beta)})

    @classmethod
    def ou_limit(cls, theta: float) -> "ReferenceLaw":
        return cls("ou_limit", {"theta": float(theta)})

    @classmethod
    def marchenko_pastur(cls, c: float) -> "ReferenceLaw":
        return cls("marchenko_pastur", {"c": float(c)})

    @classmethod
    def circular(cls) -> "ReferenceLaw":
        return cls("circular")

    @classmethod
    def gumbel(cls) -> "ReferenceLaw":
        return cls("gumbel")

    @property
    def is_semicircle(self) -> bool:
        return self.kind in SEMICIRCLE_KINDS

    @property
    def is_planar(self) -> bool:
        return self.kind == "circular"

    @property
    def radius(self) -> float:
        """Support radius of a semicircle-type law."""
        if self.kind == "semicircle":
            return float(self.params.get("radius", 2.0))
        if self.kind == "semicircle_beta":
            return math.sqrt(2.0 * self.params["beta"])
        if self.kind == "ou_limit":
            return math.sqrt(2.0 / self.params["theta"])
        raise UnsupportedError(f"{self.kind} law has no semicircle radius")

    def mp_edges(self) -> Tuple[float, float]:
        c = self.params["c"]
        return (1.0 - math.sqrt(c)) ** 2, (1.0 + math.sqrt(c)) ** 2

    def support(self) -> Tuple[float, float]:
        """Interval carrying the law (Gumbel: effective support)."""
        if self.is_semicircle:
            r = self.radius
            return -r, r
        if self.kind == "marchenko_pastur":
            lo, hi = self.mp_edges()
            return (0.0 if self.params["c"] > 1 else lo), hi
        if self.kind == "gumbel":
            return -4.0, 40.0
        raise UnsupportedError("circular law is planar")

    def atoms(self) -> List[Tuple[float, float]]:
        """Atoms as (position, mass) pairs."""
        if self.kind == "marchenko_pastur" and self.params["c"] > 1:
            return [(0.0, 1.0 - 1.0 / self.params["c"])]
        return []


def catalan(p: int) -> int:
    """
    Catalan number C_p by the recurrence C_{p+1} = sum_k C_k C_{p-k}.

    Args:
        p: Index, 0 <= p <= 30

    Returns:
        Exact integer
    """
    if p < 0:
        raise InvalidArgumentError(f"Catalan index must be nonnegative, got {p}")
    if p > MAX_MOMENT_ORDER:
        raise UnsupportedOrderError(f"Catalan index {p} exceeds {MAX_MOMENT_ORDER}")
    values = [1]
    for q in range(p):
        values.append(sum(values[k] * values[q - k] for k in range(q + 1)))
    return values[p]


def density(law: ReferenceLaw, x: Union[float, complex, np.ndarray]):
    """
    Continuous part of the law's density at x (atoms are in `law.atoms()`).

    Args:
        law: Reference law
        x: Real point(s), or complex point(s) for the circular law

    Returns:
        Nonnegative density value(s)
    """
    if law.kind == "circular":
        z = np.asarray(x)
        value = np.where(np.abs(z) <= 1.0, 1.0 / math.pi, 0.0)
        return float(value) if value.ndim == 0 else value

    if np.iscomplexobj(x):
        raise InvalidArgumentError(f"{law.kind} law is real; got a complex point")
    xs = np.asarray(x, dtype=float)

    if law.is_semicircle:
        r = law.radius
        value = (2.0 / (math.pi * r * r)) * np.sqrt(np.clip(r * r - xs * xs, 0.0, None))
    elif law.kind == "marchenko_pastur":
        c = law.params["c"]
        lo, hi = law.mp_edges()
        inside = (xs > lo) & (xs < hi) & (xs > 0)
        safe = np.where(inside, xs, 1.0)
        value = np.where(
            inside,
            np.sqrt(np.clip((hi - safe) * (safe - lo), 0.0, None)) / (2.0 * math.pi * c * safe),
            0.0,
        )
    else:
        value = np.exp(-xs - np.exp(-xs))

    return float(value) if value.ndim == 0 else value


def cdf(law: ReferenceLaw, x: Union[float, np.ndarray]):
    """
    Cumulative distribution function of a real law (circular: law of |z|).
    """
    xs = np.asarray(x, dtype=float)
    if law.is_semicircle:
        r = law.radius
        u = np.clip(xs / r, -1.0, 1.0)
        value = 0.5 + (u * np.sqrt(1.0 - u * u) + np.arcsin(u)) / math.pi
    elif law.kind == "gumbel":
        value = np.exp(-np.exp(-xs))
    elif law.kind == "circular":
        value = np.clip(xs, 0.0, 1.0) ** 2
    else:
        value = np.vectorize(lambda t: _mp_cdf(law, float(t)))(xs)
    return float(value) if np.ndim(value) == 0 else value


def _mp_cdf(law: ReferenceLaw, x: float) -> float:
    lo, hi = law.mp_edges()
    atom = sum(mass for _, mass in law.atoms()) if x >= 0 else 0.0
    if x <= lo:
        return atom
    if x >= hi:
        return 1.0
    quad = get_settings().quadrature
    part, _ = integrate.quad(
        lambda t: density(law, t), lo, x, epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit
    )
    return min(1.0, atom + part)


def moment(mu, k: int) -> Union[float, complex]:
    """
    k-th moment of an empirical measure, grid measure or reference law.

    Args:
        mu: EmpiricalMeasure, GridMeasure or ReferenceLaw
        k: Order, 0 <= k <= 30

    Returns:
        Moment value (complex for planar measures)
    """
    if k < 0:
        raise InvalidArgumentError(f"Moment order must be nonnegative, got {k}")
    if k > MAX_MOMENT_ORDER:
        raise UnsupportedOrderError(f"Moment order {k} exceeds {MAX_MOMENT_ORDER}")

    if not isinstance(mu, ReferenceLaw):
        return mu.moment(k)

    quad = get_settings().quadrature
    opts = dict(epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit)
    if mu.is_semicircle:
        r = mu.radius
        value, _ = integrate.quad(
            lambda t: t ** k, -r, r, weight="alg", wvar=(0.5, 0.5), **opts
        )
        return value * 2.0 / (math.pi * r * r)
    if mu.kind == "marchenko_pastur":
        c = mu.params["c"]
        lo, hi = mu.mp_edges()
        atom = sum(mass * pos ** k for pos, mass in mu.atoms())
        if lo > 0:
            value, _ = integrate.quad(
                lambda t: t ** (k - 1) / (2.0 * math.pi * c), lo, hi, weight="alg", wvar=(0.5, 0.5),
                **opts
            )
        else:
            value, _ = integrate.quad(
                lambda t: t ** k / (2.0 * math.pi * c), lo, hi, weight="alg", wvar=(-0.5, 0.5),
                **opts
            )
        return value + atom
    if mu.kind == "circular":
        return 1.0 if k == 0 else 0.0
    value, _ = integrate.quad(lambda t: t ** k * np.exp(-t - np.exp(-t)), -np.inf, np.inf, **opts)
    return value


def total_mass(law: ReferenceLaw) -> float:
    """Quadrature mass of the continuous part plus atoms."""
    if law.kind == "circular":
        value, _ = integrate.quad(lambda r: 2.0 * r, 0.0, 1.0)
        return value
    return float(moment(law, 0))
