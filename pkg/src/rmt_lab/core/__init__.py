"""Core module: error types, random streams and matrix ensembles."""

from .ensembles import (
    ComplexMatrix,
    HadamardReport,
    HermitianMatrix,
    Spectrum,
    eigenvalues_complex,
    eigenvalues_hermitian,
    hadamard_derivatives,
    hermitian_brownian_motion,
    hoffman_wielandt_gap,
    sample_ginibre,
    sample_goe,
    sample_gue,
    sample_haar_unitary,
    sample_matrix,
    sample_wishart,
    spectrum_of,
    wishart_brownian_motion,
)
from .exceptions import NumericalFailure, RmtLabError, ValidationFailure
from .rng import RngStream

__all__ = [
    "RngStream",
    "RmtLabError",
    "ValidationFailure",
    "NumericalFailure",
    "HermitianMatrix",
    "ComplexMatrix",
    "Spectrum",
    "HadamardReport",
    "sample_gue",
    "sample_goe",
    "sample_ginibre",
    "sample_wishart",
    "sample_haar_unitary",
    "sample_matrix",
    "eigenvalues_hermitian",
    "eigenvalues_complex",
    "spectrum_of",
    "hadamard_derivatives",
    "hoffman_wielandt_gap",
    "hermitian_brownian_motion",
    "wishart_brownian_motion",
]
