"""
Gaussian Matrix Ensembles

Samplers for GUE, GOE, Ginibre, Wishart and Haar-unitary matrices, spectra
extraction, the Hadamard eigenvalue-perturbation formulas, and matrix-valued
Brownian paths whose eigenvalues drive the particle simulations.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..config.settings import get_settings
from .exceptions import DegenerateSpectrumError, InvalidArgumentError, NumericalFailure
from .rng import RngStream

logger = logging.getLogger(__name__)

_HALF_STD = np.sqrt(0.5)


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Hermitian (or real symmetric) matrix, symmetric by construction."""
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.entries)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """General complex matrix."""
    entries: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigenvalues of one matrix draw.

    Real spectra are sorted ascending; complex spectra are unordered.
    `scale` records the normalization already applied to the values.
    """
    values: np.ndarray
    scale: float = 1.0

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def rescaled(self, factor: float) -> "Spectrum":
        return Spectrum(self.values * factor, self.scale * factor)


@dataclass(frozen=True, eq=False)
class HadamardReport:
    first_derivs: np.ndarray
    second_derivs: np.ndarray
    eigvecs_used: np.ndarray


MatrixLike = Union[HermitianMatrix, ComplexMatrix, np.ndarray]


def _as_array(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, (HermitianMatrix, ComplexMatrix)):
        return matrix.entries
    return np.asarray(matrix)


def _check_size(**sizes: int) -> None:
    for name, value in sizes.items():
        if int(value) < 1:
            raise InvalidArgumentError(f"{name} must be a positive integer, got {value}")


def _standard_complex(rows: int, cols: int, rng: RngStream) -> np.ndarray:
    re = np.asarray(rng.normal(0.0, _HALF_STD, (rows, cols)), dtype=float)
    im = np.asarray(rng.normal(0.0, _HALF_STD, (rows, cols)), dtype=float)
    return re + 1j * im


def sample_gue(n: int, rng: RngStream) -> HermitianMatrix:
    """
    Draw a complex Wigner matrix with Gaussian entries.

    Diagonal entries are N(0, 1); real and imaginary parts of the upper
    triangle are N(0, 1/2). The lower triangle is the conjugate.

    Args:
        n: Side length
        rng: Random stream

    Returns:
        HermitianMatrix with complex entries
    """
    _check_size(n=n)
    diag = np.asarray(rng.normal(0.0, 1.0, n), dtype=float)
    iu = np.triu_indices(n, k=1)
    k = len(iu[0])
    re = np.asarray(rng.normal(0.0, _HALF_STD, k), dtype=float)
    im = np.asarray(rng.normal(0.0, _HALF_STD, k), dtype=float)

    entries = np.zeros((n, n), dtype=complex)
    entries[np.diag_indices(n)] = diag
    entries[iu] = re + 1j * im
    entries[(iu[1], iu[0])] = re - 1j * im
    return HermitianMatrix(entries)


def sample_goe(n: int, rng: RngStream) -> HermitianMatrix:
    """Real Wigner matrix: diagonal N(0, 1), off-diagonal N(0, 1/2)."""
    _check_size(n=n)
    diag = np.asarray(rng.normal(0.0, 1.0, n), dtype=float)
    iu = np.triu_indices(n, k=1)
    off = np.asarray(rng.normal(0.0, _HALF_STD, len(iu[0])), dtype=float)

    entries = np.zeros((n, n), dtype=float)
    entries[np.diag_indices(n)] = diag
    entries[iu] = off
    entries[(iu[1], iu[0])] = off
    return HermitianMatrix(entries)


def sample_ginibre(n: int, rng: RngStream) -> ComplexMatrix:
    """Square matrix of independent standard complex Gaussians (E|M_ij|^2 = 1)."""
    _check_size(n=n)
    return ComplexMatrix(_standard_complex(n, n, rng))


def sample_wishart(n: int, m: int, rng: RngStream) -> HermitianMatrix:
    """
    Complex Wishart matrix (1/m) A A* with A an n x m standard complex Gaussian.

    Args:
        n: Side length of the output
        m: Number of samples (columns of A)
        rng: Random stream

    Returns:
        Hermitian positive semidefinite matrix
    """
    _check_size(n=n, m=m)
    a = _standard_complex(n, m, rng)
    w = (a @ a.conj().T) / m
    # exact Hermitian symmetry
    w = (w + w.conj().T) / 2
    return HermitianMatrix(w)


def sample_haar_unitary(n: int, rng: RngStream) -> ComplexMatrix:
    """
    Haar-distributed unitary matrix by Gram-Schmidt on a Ginibre draw.

    Householder QR followed by rescaling each column with the phase of R_ii
    yields exactly the Gram-Schmidt factor with positive real normalizers.

    Raises:
        NumericalFailure: if every retry produced a numerically singular draw
    """
    _check_size(n=n)
    sampling = get_settings().sampling
    for attempt in range(sampling.haar_max_retries + 1):
        z = sample_ginibre(n, rng).entries
        q, r = linalg.qr(z)
        diag = np.diagonal(r)
        norms = np.abs(diag)
        if norms.min() >= sampling.haar_min_norm:
            return ComplexMatrix(q * (diag / norms)[np.newaxis, :])
        logger.warning("Singular Ginibre draw in Haar sampler (attempt %d)", attempt + 1)
    raise NumericalFailure(
        f"Haar sampler drew {sampling.haar_max_retries + 1} numerically singular matrices"
    )


def eigenvalues_hermitian(matrix: MatrixLike) -> Spectrum:
    """
    All eigenvalues of a Hermitian matrix, ascending.

    Args:
        matrix: Hermitian matrix

    Returns:
        Real spectrum
    """
    a = _as_array(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"Expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("Matrix has non-finite entries")
    values = linalg.eigvalsh(a, check_finite=False)
    return Spectrum(np.sort(values))


def eigenvalues_complex(matrix: MatrixLike) -> Spectrum:
    """
    All eigenvalues of a square complex matrix (unordered).

    Args:
        matrix: Square matrix

    Returns:
        Complex spectrum
    """
    a = _as_array(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"Expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("Matrix has non-finite entries")
    values = linalg.eigvals(a, check_finite=False)
    return Spectrum(np.asarray(values, dtype=complex))


def hadamard_derivatives(a: MatrixLike, b: MatrixLike) -> HadamardReport:
    """
    First and second derivatives at t=0 of the eigenvalues of A + tB.

    Args:
        a: Hermitian base matrix with simple spectrum
        b: Hermitian perturbation direction

    Returns:
        HadamardReport with derivatives ordered like the ascending eigenvalues

    Raises:
        DegenerateSpectrumError: if two eigenvalues of A are closer than gap_tol
    """
    a_arr = _as_array(a)
    b_arr = _as_array(b)
    if a_arr.shape != b_arr.shape or a_arr.shape[0] != a_arr.shape[1]:
        raise InvalidArgumentError("A and B must be square matrices of equal size")

    lam, u = linalg.eigh(a_arr)
    n = len(lam)
    gap_tol = get_settings().sampling.hadamard_gap_rel_tol * float(np.max(np.abs(lam)))
    if n > 1:
        min_gap = float(np.min(np.diff(lam)))
        if min_gap <= gap_tol:
            raise DegenerateSpectrumError(
                f"Minimum eigenvalue gap {min_gap:.3e} is below gap_tol {gap_tol:.3e}"
            )

    c = u.conj().T @ b_arr @ u
    first = np.real(np.diagonal(c)).copy()
    diffs = lam[:, np.newaxis] - lam[np.newaxis, :]
    np.fill_diagonal(diffs, np.inf)
    # second[i] = 2 sum_k |C_ki|^2 / (lam_i - lam_k)
    second = 2.0 * np.sum(np.abs(c) ** 2 / diffs.T, axis=0)
    return HadamardReport(first, second, u)


def hoffman_wielandt_gap(a: MatrixLike, b: MatrixLike) -> float:
    """
    ||A - B||_F minus the l2 distance of the ordered spectra (nonnegative).
    """
    a_arr = _as_array(a)
    b_arr = _as_array(b)
    la = eigenvalues_hermitian(a_arr).values
    lb = eigenvalues_hermitian(b_arr).values
    return float(linalg.norm(a_arr - b_arr, "fro") - np.linalg.norm(la - lb))


def hermitian_brownian_motion(
    n: int,
    times: Sequence[float],
    beta: int,
    rng: RngStream,
) -> np.ndarray:
    """
    Matrix Brownian path scaled so its eigenvalues follow the Dyson system.

    The path is sqrt(2/(beta n)) H(t) with H a GOE (beta=1) or GUE (beta=2)
    valued Brownian motion started at 0.

    Args:
        n: Side length
        times: Increasing nonnegative sample times
        beta: 1 or 2
        rng: Random stream

    Returns:
        Array of shape (len(times), n, n)
    """
    if beta not in (1, 2):
        raise InvalidArgumentError(f"beta must be 1 or 2, got {beta}")
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise InvalidArgumentError("times must be increasing and nonnegative")

    sampler = sample_goe if beta == 1 else sample_gue
    factor = np.sqrt(2.0 / (beta * n))
    dtype = float if beta == 1 else complex
    path = np.zeros((len(t), n, n), dtype=dtype)
    current = np.zeros((n, n), dtype=dtype)
    previous = 0.0
    for k, tk in enumerate(t):
        dt = tk - previous
        if dt > 0:
            current = current + np.sqrt(dt) * sampler(n, rng).entries
        path[k] = factor * current
        previous = tk
    return path


def wishart_brownian_motion(
    n: int,
    m: int,
    times: Sequence[float],
    rng: RngStream,
) -> np.ndarray:
    """
    Wishart path (1/n) A_t A_t* with A an n x m complex Brownian matrix.

    Returns:
        Array of shape (len(times), n, n)
    """
    _check_size(n=n, m=m)
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise InvalidArgumentError("times must be increasing and nonnegative")

    path = np.zeros((len(t), n, n), dtype=complex)
    a = np.zeros((n, m), dtype=complex)
    previous = 0.0
    for k, tk in enumerate(t):
        dt = tk - previous
        if dt > 0:
            a = a + np.sqrt(dt) * _standard_complex(n, m, rng)
        w = (a @ a.conj().T) / n
        path[k] = (w + w.conj().T) / 2
        previous = tk
    return path


def sample_matrix(ensemble: str, n: int, rng: RngStream, m: Optional[int] = None) -> MatrixLike:
    """Dispatch by ensemble name (gue, goe, ginibre, wishart, haar)."""
    if ensemble == "gue":
        return sample_gue(n, rng)
    if ensemble == "goe":
        return sample_goe(n, rng)
    if ensemble == "ginibre":
        return sample_ginibre(n, rng)
    if ensemble == "wishart":
        return sample_wishart(n, m if m is not None else n, rng)
    if ensemble == "haar":
        return sample_haar_unitary(n, rng)
    raise InvalidArgumentError(f"Unknown ensemble '{ensemble}'")


def spectrum_of(matrix: MatrixLike) -> Spectrum:
    """Eigenvalues with the solver matching the matrix type."""
    if isinstance(matrix, HermitianMatrix):
        return eigenvalues_hermitian(matrix)
    return eigenvalues_complex(matrix)
