"""
Determinantal Kernels and Correlation Functions

The GUE Hermite kernel (Christoffel-Darboux and direct-sum forms), the GUE
one-point and joint eigenvalue densities, kernel dispatch over the GUE and
Ginibre families, reproducing-trace quadrature, and k-point correlation
determinants.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, special

from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError, OverflowGuardError, UnsupportedError
from .ginibre import ginibre_density1, ginibre_infinite_kernel, ginibre_kernel
from .hermite import NORMALIZED_MAX_DEGREE, hermite_table

CD_SWITCH = 1e-6
MAX_CORRELATION_POINTS = 12

KERNEL_FAMILIES = ("gue_hermite", "ginibre_finite", "ginibre_infinite")
KERNEL_FORMS = ("auto", "direct", "christoffel_darboux")


@dataclass(frozen=True)
class KernelSpec:
    """
    A determinantal kernel family.

    Attributes:
        family: `gue_hermite`, `ginibre_finite` or `ginibre_infinite`
        n: Number of particles (finite families only)
    """
    family: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise InvalidArgumentError(f"Unknown kernel family '{self.family}'")
        if self.family == "ginibre_infinite":
            if self.n is not None:
                raise InvalidArgumentError("The infinite Ginibre kernel takes no n")
        elif self.n is None or self.n < 1:
            raise InvalidArgumentError(f"{self.family} needs a positive n, got {self.n}")
        if self.family == "gue_hermite" and self.n > NORMALIZED_MAX_DEGREE:
            raise OverflowGuardError(f"GUE kernel size {self.n} exceeds {NORMALIZED_MAX_DEGREE}")

    @property
    def is_planar(self) -> bool:
        return self.family != "gue_hermite"


def _check_gue_size(n: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    if n > NORMALIZED_MAX_DEGREE:
        raise OverflowGuardError(f"GUE kernel size {n} exceeds {NORMALIZED_MAX_DEGREE}")


def gue_kernel(n: int, x, y, form: str = "auto"):
    """
    GUE Hermite kernel K_N(x, y) = sum_{l<N} h_l(x) h_l(y).

    The `auto` form uses Christoffel-Darboux,

        K_N(x, y) = sqrt(N) (h_N(x) h_{N-1}(y) - h_{N-1}(x) h_N(y)) / (x - y),

    when |x - y| > 1e-6 and the direct sum otherwise.

    Args:
        n: Number of particles, at most 500
        x, y: Real points (broadcast)
        form: `auto`, `direct` or `christoffel_darboux`

    Returns:
        Kernel value(s)
    """
    _check_gue_size(n)
    if form not in KERNEL_FORMS:
        raise InvalidArgumentError(f"Unknown kernel form '{form}'")
    xs, ys = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    tx = hermite_table(n, xs)
    ty = hermite_table(n, ys)

    direct = np.sum(tx[:n] * ty[:n], axis=0)
    if form == "direct":
        value = direct
    else:
        diff = xs - ys
        close = np.abs(diff) <= CD_SWITCH
        if form == "christoffel_darboux" and np.any(close):
            raise InvalidArgumentError("Christoffel-Darboux form needs |x - y| > 1e-6")
        safe = np.where(close, 1.0, diff)
        cd = math.sqrt(n) * (tx[n] * ty[n - 1] - tx[n - 1] * ty[n]) / safe
        value = np.where(close, direct, cd)
    return float(value) if np.ndim(value) == 0 else value


def gue_density1(n: int, x):
    """One-point density K_N(x, x) / N of the GUE eigenvalues (weight e^{-x^2/2})."""
    value = gue_kernel(n, x, x) / n
    return float(value) if np.ndim(value) == 0 else value


def log_vandermonde(values: Sequence[float]) -> float:
    """log |prod_{i<j} (x_j - x_i)|, -inf for coincident points."""
    x = np.asarray(values, dtype=float)
    i, j = np.triu_indices(len(x), k=1)
    gaps = np.abs(x[j] - x[i])
    if np.any(gaps == 0):
        return -math.inf
    return float(np.sum(np.log(gaps)))


def log_superfactorial(n: int) -> float:
    """log(1! 2! ... n!)."""
    return float(np.sum(special.gammaln(np.arange(2, n + 2))))


def gue_eigenvalue_density(values: Sequence[float]) -> float:
    """
    Joint density of the unordered GUE eigenvalues with weight e^{-x^2/2}:

        Delta(x)^2 exp(-|x|^2 / 2) / ((2 pi)^{N/2} 1! 2! ... N!)

    which equals det[K_N(x_i, x_j)] / N!.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidArgumentError("Expected a nonempty 1-D point list")
    n = len(x)
    log_delta = log_vandermonde(x)
    if log_delta == -math.inf:
        return 0.0
    log_value = (
        2.0 * log_delta
        - 0.5 * float(np.dot(x, x))
        - 0.5 * n * math.log(2.0 * math.pi)
        - log_superfactorial(n)
    )
    return math.exp(log_value)


def kernel(kspec: KernelSpec, x, y):
    """Evaluate the kernel of `kspec` at (x, y)."""
    if kspec.family == "gue_hermite":
        return gue_kernel(kspec.n, x, y)
    if kspec.family == "ginibre_finite":
        return ginibre_kernel(kspec.n, x, y)
    return ginibre_infinite_kernel(x, y)


def kernel_trace(kspec: KernelSpec) -> float:
    """
    Reproducing trace integral of K(x, x), equal to N for finite families.

    GUE by adaptive quadrature on the line, Ginibre by radial quadrature
    (K(z, z) depends on |z| only).
    """
    quad = get_settings().quadrature
    opts = dict(epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit)
    if kspec.family == "ginibre_infinite":
        raise UnsupportedError("The infinite Ginibre kernel has infinite trace")
    n = kspec.n
    edge = 2.0 * math.sqrt(n) + 12.0
    if kspec.family == "gue_hermite":
        value, _ = integrate.quad(lambda t: gue_kernel(n, t, t), -edge, edge, **opts)
        return value
    reach = math.sqrt(n) + 12.0
    value, _ = integrate.quad(
        lambda r: 2.0 * math.pi * r * n * ginibre_density1(n, r), 0.0, reach, points=[math.sqrt(n)], **opts
    )
    return value


def gram_matrix(kspec: KernelSpec, points: Sequence) -> np.ndarray:
    pts = list(points)
    k = len(pts)
    dtype = complex if kspec.is_planar else float
    gram = np.empty((k, k), dtype=dtype)
    for i in range(k):
        for j in range(i, k):
            value = kernel(kspec, pts[i], pts[j])
            gram[i, j] = value
            gram[j, i] = np.conj(value)
    return gram


def correlation_det(kspec: KernelSpec, points: Sequence) -> float:
    """
    k-point correlation det[K(x_i, x_j)]_{i,j<=k}.

    Args:
        kspec: Kernel family
        points: Up to 12 points (real for GUE, complex for Ginibre)

    Returns:
        Determinant, nonnegative up to roundoff
    """
    k = len(points)
    if k == 0:
        raise InvalidArgumentError("Need at least one point")
    if k > MAX_CORRELATION_POINTS:
        raise UnsupportedError(f"Correlation of {k} points exceeds {MAX_CORRELATION_POINTS}")
    return float(np.real(np.linalg.det(gram_matrix(kspec, points))))
