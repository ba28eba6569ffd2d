"""
Spectral Measures Package

Reference laws, empirical and grid measures, Stieltjes/Hilbert/log-potential
transforms, and distances between measures.
"""

from .distances import (
    BLDistance,
    bl_distance,
    bl_distance_with_mode,
    ks_distance,
    ks_distance_samples,
    radial_ks_circular,
)
from .empirical import (
    EmpiricalMeasure,
    GridMeasure,
    discretize_law,
    empirical_from_spectrum,
    read_grid_measure_csv,
    uniform_grid_measure,
    write_grid_measure_csv,
)
from .laws import ReferenceLaw, catalan, cdf, density, moment, total_mass
from .transforms import (
    StieltjesField,
    hilbert_transform,
    log_potential,
    log_potential_semicircle,
    semicircle_stieltjes,
    stieltjes,
    stieltjes_invert,
)

__all__ = [
    "ReferenceLaw",
    "catalan",
    "cdf",
    "density",
    "moment",
    "total_mass",
    "EmpiricalMeasure",
    "GridMeasure",
    "discretize_law",
    "empirical_from_spectrum",
    "uniform_grid_measure",
    "read_grid_measure_csv",
    "write_grid_measure_csv",
    "StieltjesField",
    "stieltjes",
    "semicircle_stieltjes",
    "stieltjes_invert",
    "hilbert_transform",
    "log_potential",
    "log_potential_semicircle",
    "BLDistance",
    "bl_distance",
    "bl_distance_with_mode",
    "ks_distance",
    "ks_distance_samples",
    "radial_ks_circular",
]
