"""
Method of Characteristics for the Mean-Field Stieltjes Equation

The limit Stieltjes transform S(t, z) of the Dyson flow solves the complex
Burgers equation dS/dt + S dS/dz = 0; the Ornstein-Uhlenbeck flow adds
-theta (z dS/dz + S). Along characteristics

    Dyson: z = r + t S0(r),                                S(t, z) = S0(r)
    OU:    z = r e^{-theta t} + S0(r) sinh(theta t)/theta, S(t, z) = e^{theta t} S0(r)

and the foot r is found by damped Newton kept in the upper half-plane.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError, NoConvergenceError, StencilError
from ..measures.empirical import GridMeasure
from ..measures.transforms import StieltjesField, hilbert_transform, semicircle_stieltjes

logger = logging.getLogger(__name__)

FLOWS = ("dyson", "ou")
MAX_DAMPING_HALVINGS = 60


@dataclass(frozen=True)
class CharacteristicQuery:
    S0: StieltjesField
    t: float
    z: complex
    flow: str = "dyson"
    theta: Optional[float] = None

    def __post_init__(self):
        if self.flow not in FLOWS:
            raise InvalidArgumentError(f"Unknown flow '{self.flow}'")
        if not self.t > 0:
            raise InvalidArgumentError(f"t must be positive, got {self.t}")
        if not complex(self.z).imag > 0:
            raise InvalidArgumentError(f"z must lie in the upper half-plane, got {self.z}")
        if self.flow == "ou" and not (self.theta is not None and self.theta > 0):
            raise InvalidArgumentError("OU flow needs theta > 0")
        object.__setattr__(self, "z", complex(self.z))


@dataclass(frozen=True)
class CharacteristicSolution:
    r: complex
    S_value: complex
    newton_iters: int
    residual: float


def _derivative(field: StieltjesField) -> Callable[[complex], complex]:
    if field.derivative is not None:
        return lambda r: complex(field.derivative(r))

    def central(r: complex) -> complex:
        h = 1e-6 * max(1.0, abs(r))
        return (field(r + h) - field(r - h)) / (2.0 * h)

    return central


def _characteristic_map(q: CharacteristicQuery):
    s0 = q.S0
    ds0 = _derivative(s0)
    if q.flow == "dyson":
        t = q.t
        return (lambda r: r + t * s0(r) - q.z), (lambda r: 1.0 + t * ds0(r))
    decay = math.exp(-q.theta * q.t)
    spread = math.sinh(q.theta * q.t) / q.theta
    return (lambda r: r * decay + s0(r) * spread - q.z), (lambda r: decay + ds0(r) * spread)


def solve_characteristic(q: CharacteristicQuery) -> CharacteristicSolution:
    """
    Foot of the characteristic through (t, z) and the value S(t, z).

    Newton steps are halved while they would leave the upper half-plane or
    increase the residual.

    Raises:
        NoConvergenceError: Residual above tol(1 + |z|) after the iteration cap
    """
    solver = get_settings().solver
    tol = solver.newton_tol * (1.0 + abs(q.z))
    f, df = _characteristic_map(q)

    r = q.z if q.flow == "dyson" else q.z * math.exp(q.theta * q.t)
    value = f(r)
    best_r, best_res = r, abs(value)
    iters = 0
    while abs(value) > tol and iters < solver.newton_max_iters:
        iters += 1
        slope = df(r)
        if slope == 0:
            break
        delta = -value / slope
        damping = 1.0
        for _ in range(MAX_DAMPING_HALVINGS):
            candidate = r + damping * delta
            if candidate.imag > 0:
                cand_value = f(candidate)
                if abs(cand_value) < abs(value) or damping < 1e-12:
                    break
            damping *= 0.5
        else:
            break
        r, value = candidate, cand_value
        if abs(value) < best_res:
            best_r, best_res = r, abs(value)

    if abs(value) > tol:
        raise NoConvergenceError(
            f"Characteristic through z={q.z}, t={q.t} did not converge (residual {best_res:.3g})",
            estimates=[best_res],
            best=best_r,
        )
    s_value = q.S0(r)
    if q.flow == "ou":
        s_value = math.exp(q.theta * q.t) * s_value
    logger.debug("Characteristic z=%s t=%g: %d Newton iterations, residual %.3g", q.z, q.t, iters, abs(value))
    return CharacteristicSolution(r, complex(s_value), iters, float(abs(value)))


def mean_field_value(S0: StieltjesField, t: float, z: complex, flow: str = "dyson",
                     theta: Optional[float] = None) -> complex:
    return solve_characteristic(CharacteristicQuery(S0, t, z, flow, theta)).S_value


def dyson_scaling_check(z: complex, t: float):
    """
    Dyson flow from delta_0 against the scaling t^{-1/2} S_sigma(z t^{-1/2}).

    Returns:
        (lhs, rhs) pair of complex values
    """
    lhs = mean_field_value(StieltjesField.dirac(0.0), t, z)
    root = math.sqrt(t)
    rhs = semicircle_stieltjes(complex(z) / root) / root
    return lhs, rhs


def ou_longtime(theta: float, z: complex) -> complex:
    """
    Long-time limit theta (z - sqrt(z - R) sqrt(z + R)), R^2 = 2 / theta:
    the Stieltjes transform of the semicircle of radius sqrt(2 / theta).
    """
    if not theta > 0:
        raise InvalidArgumentError(f"theta must be positive, got {theta}")
    z = complex(z)
    if not z.imag > 0:
        raise InvalidArgumentError(f"z must lie in the upper half-plane, got {z}")
    radius = math.sqrt(2.0 / theta)
    return semicircle_stieltjes(z, radius)


def burgers_residual(
    flow: str,
    S0: StieltjesField,
    t: float,
    z: complex,
    h: float = 1e-4,
    theta: Optional[float] = None,
    solution: Optional[Callable[[float, complex], complex]] = None,
) -> float:
    """
    |dS/dt + S dS/dz - theta (z dS/dz + S)| by central differences, with S
    from the characteristic solver (or `solution(t, z)` when given).

    Raises:
        StencilError: If the stencil leaves the upper half-plane or t <= h
    """
    z = complex(z)
    if not z.imag > 2.0 * h:
        raise StencilError(f"Need Im z > 2h, got Im z = {z.imag}, h = {h}")
    if not t > h:
        raise StencilError(f"Need t > h, got t = {t}, h = {h}")
    if solution is None:
        def solution(s: float, w: complex) -> complex:
            return mean_field_value(S0, s, w, flow, theta)

    s = solution(t, z)
    ds_dt = (solution(t + h, z) - solution(t - h, z)) / (2.0 * h)
    ds_dz = (solution(t, z + h) - solution(t, z - h)) / (2.0 * h)
    residual = ds_dt + s * ds_dz
    if flow == "ou":
        residual -= theta * (z * ds_dz + s)
    return float(abs(residual))


def frozen_semicircle(t: float, z: complex) -> complex:
    """Time-independent semicircle transform, a non-solution of the Dyson flow."""
    return semicircle_stieltjes(complex(z))


def stationary_residual(mu: GridMeasure, theta: float, margin: float = 0.1) -> float:
    """
    sup |H(mu)(x) - theta x| over interior cell midpoints of the support
    (cells with mass above mass_tol).

    The two edge cells of the support are always dropped; `margin` drops a
    further fraction of the support width at each end. Near a square-root
    edge the cell-average error of H is of order sqrt(cell width).

    Args:
        mu: Grid measure
        theta: OU confinement strength
        margin: Fraction of the support width excluded at each end, in [0, 0.5)
    """
    if not theta > 0:
        raise InvalidArgumentError(f"theta must be positive, got {theta}")
    if not 0.0 <= margin < 0.5:
        raise InvalidArgumentError(f"margin must be in [0, 0.5), got {margin}")
    mass_tol = get_settings().solver.mass_tol
    support = np.flatnonzero(mu.cell_masses > mass_tol)
    if support.size == 0:
        raise InvalidArgumentError("Measure has no cell above the mass tolerance")
    lo, hi = mu.left[support[0]], mu.right[support[-1]]
    interior = support[1:-1]
    mids = mu.midpoints[interior]
    width = margin * (hi - lo)
    points = mids[(mids >= lo + width) & (mids <= hi - width)]
    if points.size == 0:
        raise InvalidArgumentError("Support is too narrow for the residual grid")
    return float(max(abs(hilbert_transform(mu, x) - theta * x) for x in points))
