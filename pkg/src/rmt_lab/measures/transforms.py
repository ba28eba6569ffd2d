"""
Stieltjes, Hilbert and Logarithmic-Potential Transforms

Evaluations are exact per atom or per grid cell; reference laws use closed
forms where one exists. Stieltjes inversion integrates -Im S(x + i eps)/pi
between breakpoints and extrapolates eps -> 0.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from ..config.settings import get_settings
from ..core.exceptions import (
    InvalidArgumentError,
    NoConvergenceError,
    SingularPointError,
    UnsupportedError,
)
from .empirical import EmpiricalMeasure, GridMeasure
from .laws import ReferenceLaw, density

logger = logging.getLogger(__name__)

MeasureLike = Union[EmpiricalMeasure, GridMeasure, ReferenceLaw]


def _check_off_axis(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0:
        raise InvalidArgumentError(f"Stieltjes transform needs Im z != 0, got {z}")
    return z


def _semicircle_closed(z, radius: float):
    # product of principal roots: the Stieltjes branch on C minus [-R, R]
    return (2.0 / radius ** 2) * (z - np.sqrt(z - radius) * np.sqrt(z + radius))


def semicircle_stieltjes(z: complex, radius: float = 2.0) -> complex:
    """
    Closed-form Stieltjes transform of the semicircle law of radius R.

    For R = 2 this is (z - sqrt(z^2 - 4)) / 2 with the branch behaving like
    1/z at infinity.

    Args:
        z: Point off the real axis
        radius: Support radius

    Returns:
        S(z)
    """
    z = _check_off_axis(z)
    return complex(_semicircle_closed(z, radius))


def _mp_closed(z, c: float, edges: Tuple[float, float]):
    lo, hi = edges
    root = np.sqrt(z - lo) * np.sqrt(z - hi)
    return (z - (1.0 - c) - root) / (2.0 * c * z)


def _grid_stieltjes(mu: GridMeasure, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)[..., np.newaxis]
    terms = mu.densities * (np.log(z - mu.left) - np.log(z - mu.right))
    return terms.sum(axis=-1)


def _grid_stieltjes_derivative(mu: GridMeasure, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)[..., np.newaxis]
    terms = mu.densities * (1.0 / (z - mu.left) - 1.0 / (z - mu.right))
    return terms.sum(axis=-1)


def _law_stieltjes(law: ReferenceLaw, z: complex) -> complex:
    if law.is_semicircle:
        return complex(_semicircle_closed(z, law.radius))
    if law.kind == "marchenko_pastur":
        return complex(_mp_closed(z, law.params["c"], law.mp_edges()))
    if law.is_planar:
        raise UnsupportedError("Stieltjes transform of a planar law is not defined here")
    lo, hi = law.support()
    quad = get_settings().quadrature
    re, _ = integrate.quad(lambda t: (density(law, t) / (z - t)).real, lo, hi, limit=quad.limit)
    im, _ = integrate.quad(lambda t: (density(law, t) / (z - t)).imag, lo, hi, limit=quad.limit)
    return complex(re, im)


def stieltjes(mu: MeasureLike, z: complex) -> complex:
    """
    Stieltjes transform S_mu(z) = integral of 1/(z - t) dmu(t).

    Args:
        mu: EmpiricalMeasure, GridMeasure, ReferenceLaw or StieltjesField
        z: Point off the real axis

    Returns:
        Complex value with |S| <= 1/|Im z|
    """
    z = _check_off_axis(z)
    if isinstance(mu, StieltjesField):
        return mu(z)
    if isinstance(mu, EmpiricalMeasure):
        if mu.is_planar:
            raise UnsupportedError("Stieltjes transform of a planar measure is not defined here")
        return complex(np.mean(1.0 / (z - mu.atoms)))
    if isinstance(mu, GridMeasure):
        return complex(_grid_stieltjes(mu, z))
    if isinstance(mu, ReferenceLaw):
        return _law_stieltjes(mu, z)
    raise InvalidArgumentError(f"Unsupported measure type {type(mu).__name__}")


@dataclass(frozen=True)
class StieltjesField:
    """
    A Stieltjes transform given as an evaluation map.

    provenance is one of closed-form, measure-backed, characteristic-solved.
    singular_points lists real points where the boundary values are singular
    (atoms, density jumps); inversion uses them as quadrature breakpoints.
    """
    evaluate: Callable[[complex], complex]
    provenance: str = "closed-form"
    derivative: Optional[Callable[[complex], complex]] = None
    singular_points: Tuple[float, ...] = field(default_factory=tuple)

    def __call__(self, z: complex) -> complex:
        return complex(self.evaluate(complex(z)))

    @classmethod
    def dirac(cls, x0: float = 0.0) -> "StieltjesField":
        return cls(
            evaluate=lambda z: 1.0 / (z - x0),
            provenance="closed-form",
            derivative=lambda z: -1.0 / (z - x0) ** 2,
            singular_points=(float(x0),),
        )

    @classmethod
    def semicircle(cls, radius: float = 2.0) -> "StieltjesField":
        half_r2 = radius * radius / 2.0

        def derivative(z: complex) -> complex:
            s = _semicircle_closed(z, radius)
            return s / (half_r2 * s - z)

        return cls(
            evaluate=lambda z: _semicircle_closed(z, radius),
            provenance="closed-form",
            derivative=derivative,
            singular_points=(-radius, radius),
        )

    @classmethod
    def from_measure(cls, mu: MeasureLike) -> "StieltjesField":
        if isinstance(mu, EmpiricalMeasure):
            if mu.is_planar:
                raise UnsupportedError("Stieltjes field of a planar measure is not defined here")
            atoms = mu.atoms
            return cls(
                evaluate=lambda z: np.mean(1.0 / (z - atoms)),
                provenance="measure-backed",
                derivative=lambda z: -np.mean(1.0 / (z - atoms) ** 2),
                singular_points=tuple(np.unique(atoms).tolist()),
            )
        if isinstance(mu, GridMeasure):
            return cls(
                evaluate=lambda z: _grid_stieltjes(mu, z),
                provenance="measure-backed",
                derivative=lambda z: _grid_stieltjes_derivative(mu, z),
                singular_points=tuple(mu.nodes.tolist()),
            )
        if isinstance(mu, ReferenceLaw):
            if mu.is_semicircle:
                return cls.semicircle(mu.radius)
            points = tuple(sorted({p for p, _ in mu.atoms()} | set(mu.support())))
            return cls(evaluate=lambda z: _law_stieltjes(mu, z), provenance="closed-form",
                       singular_points=points)
        raise InvalidArgumentError(f"Unsupported measure type {type(mu).__name__}")


def _inversion_integral(transform: StieltjesField, a: float, b: float, eps: float) -> float:
    quad = get_settings().quadrature
    inner = sorted(p for p in transform.singular_points if a < p < b)
    breaks = [a] + inner + [b]
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        value, _ = integrate.quad(
            lambda x: transform(complex(x, eps)).imag,
            lo, hi, epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit,
        )
        total += value
    return -total / math.pi


def stieltjes_invert(
    transform: Union[StieltjesField, MeasureLike],
    a: float,
    b: float,
    eps_seq: Optional[Sequence[float]] = None,
) -> float:
    """
    Recover mu([a, b]) from its Stieltjes transform.

    Evaluates -1/pi * integral_a^b Im S(x + i eps) dx along a decreasing eps
    sequence and applies first-order Richardson extrapolation between
    consecutive levels.

    Args:
        transform: StieltjesField (or a measure, wrapped automatically)
        a, b: Interval endpoints, a < b
        eps_seq: Decreasing positive offsets, default 1e-1 .. 1e-4

    Returns:
        Extrapolated mass of [a, b]

    Raises:
        NoConvergenceError: if the last two extrapolants differ by more than tol
    """
    if not a < b:
        raise InvalidArgumentError(f"Need a < b, got [{a}, {b}]")
    if not isinstance(transform, StieltjesField):
        transform = StieltjesField.from_measure(transform)
    settings = get_settings().quadrature
    eps = list(eps_seq) if eps_seq is not None else list(settings.inversion_eps)
    if not eps or any(e <= 0 for e in eps) or any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise InvalidArgumentError("eps_seq must be positive and strictly decreasing")

    raw = [_inversion_integral(transform, a, b, e) for e in eps]
    if len(raw) == 1:
        return raw[0]
    extrapolated = []
    for k in range(len(raw) - 1):
        ratio = eps[k] / eps[k + 1]
        extrapolated.append((ratio * raw[k + 1] - raw[k]) / (ratio - 1.0))
    logger.debug("Inversion on [%g, %g]: raw=%s extrapolated=%s", a, b, raw, extrapolated)

    if len(extrapolated) >= 2 and abs(extrapolated[-1] - extrapolated[-2]) > settings.inversion_tol:
        raise NoConvergenceError(
            f"Inversion on [{a}, {b}] did not settle: last estimates "
            f"{extrapolated[-2]:.6g}, {extrapolated[-1]:.6g}",
            estimates=raw + extrapolated,
            best=extrapolated[-1],
        )
    return float(extrapolated[-1])


def hilbert_transform(mu: MeasureLike, x: float) -> float:
    """
    Principal-value transform H(mu)(x) = lim Re S(x + i eps).

    Two-point extrapolation over eps in the configured pair (1e-3, 5e-4).

    Raises:
        SingularPointError: if x is an atom of mu (or a density jump of a grid)
    """
    x = float(x)
    if isinstance(mu, EmpiricalMeasure):
        if mu.is_planar:
            raise UnsupportedError("Hilbert transform of a planar measure is not defined here")
        if np.any(np.isclose(mu.atoms, x, rtol=0.0, atol=1e-12 * max(1.0, abs(x)))):
            raise SingularPointError(f"x = {x} is an atom of the measure")
    elif isinstance(mu, GridMeasure):
        hit = np.flatnonzero(np.isclose(mu.nodes, x, rtol=0.0, atol=1e-12 * max(1.0, abs(x))))
        if hit.size:
            d = np.concatenate(([0.0], mu.densities, [0.0]))
            k = hit[0]
            if d[k] != d[k + 1]:
                raise SingularPointError(f"x = {x} is a density jump of the grid measure")
    elif isinstance(mu, ReferenceLaw):
        if any(abs(p - x) < 1e-12 for p, _ in mu.atoms()):
            raise SingularPointError(f"x = {x} is an atom of the law")

    eps1, eps2 = get_settings().quadrature.hilbert_eps
    r1 = stieltjes(mu, complex(x, eps1)).real
    r2 = stieltjes(mu, complex(x, eps2)).real
    ratio = eps1 / eps2
    return float((ratio * r2 - r1) / (ratio - 1.0))


def _psi(u: np.ndarray) -> np.ndarray:
    # antiderivative of log|u|, continuous at 0
    au = np.abs(u)
    safe = np.where(au > 0, au, 1.0)
    return np.where(au > 0, u * np.log(safe) - u, 0.0)


def _semicircle_unit_potential(u: float) -> float:
    # log potential of the semicircle of radius sqrt(2)
    edge = math.sqrt(2.0)
    au = abs(u)
    if au <= edge:
        return (u * u - math.log(2.0) - 1.0) / 2.0
    tail, _ = integrate.quad(
        lambda t: t - math.sqrt(t * t - 2.0), edge, au, epsabs=1e-12, epsrel=1e-10, limit=200
    )
    return (1.0 - math.log(2.0)) / 2.0 + tail


def log_potential_semicircle(x: float, beta: float = 1.0) -> float:
    """
    Logarithmic potential of the beta-semicircle at x.

    Closed form on the support [-sqrt(2 beta), sqrt(2 beta)]; outside, the
    edge value plus the integral of the real Stieltjes branch.

    Args:
        x: Real point
        beta: Positive inverse temperature

    Returns:
        integral of log|x - y| d sigma_beta(y)
    """
    if beta <= 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    root = math.sqrt(beta)
    return math.log(root) + _semicircle_unit_potential(float(x) / root)


def log_potential(mu: MeasureLike, x: Union[float, np.ndarray]):
    """
    Logarithmic potential U(x) = integral of log|x - y| dmu(y).

    Grid measures integrate log exactly per cell; atomic measures give -inf at
    an atom.
    """
    xs = np.asarray(x, dtype=float)
    if isinstance(mu, GridMeasure):
        u = xs[..., np.newaxis]
        value = np.sum(mu.densities * (_psi(u - mu.left) - _psi(u - mu.right)), axis=-1)
    elif isinstance(mu, EmpiricalMeasure):
        if mu.is_planar:
            raise UnsupportedError("Planar log potentials are not implemented")
        with np.errstate(divide="ignore"):
            value = np.mean(np.log(np.abs(xs[..., np.newaxis] - mu.atoms)), axis=-1)
    elif isinstance(mu, ReferenceLaw) and mu.is_semicircle:
        beta = mu.radius ** 2 / 2.0
        value = np.vectorize(lambda t: log_potential_semicircle(t, beta))(xs)
    else:
        raise UnsupportedError(f"No log potential for {type(mu).__name__}")
    return float(value) if np.ndim(value) == 0 else value
