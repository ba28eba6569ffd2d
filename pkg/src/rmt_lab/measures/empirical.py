"""
Empirical and Grid Measures

EmpiricalMeasure is the uniform atomic measure on a spectrum; GridMeasure is a
piecewise-constant density on a strictly increasing grid, the carrier used by
the energy functionals and the equilibrium solver.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

import numpy as np
import pandas as pd

from ..core.ensembles import Spectrum
from ..core.exceptions import InvalidArgumentError, UnsupportedError
from .laws import ReferenceLaw, cdf

GRID_COLUMNS = ["node_left", "node_right", "mass"]


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    """Uniform atomic measure, mass 1/n per atom (real atoms sorted)."""
    atoms: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms)
        if atoms.ndim != 1 or atoms.size == 0:
            raise InvalidArgumentError("Empirical measure needs a nonempty 1-D atom list")
        if not np.iscomplexobj(atoms):
            atoms = np.sort(atoms.astype(float))
        object.__setattr__(self, "atoms", atoms)

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def is_planar(self) -> bool:
        return np.iscomplexobj(self.atoms)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)

    def moment(self, k: int):
        value = np.mean(self.atoms ** k)
        return complex(value) if self.is_planar else float(value)


@dataclass(frozen=True, eq=False)
class GridMeasure:
    """
    Piecewise-constant density on cells [nodes[k], nodes[k+1]].

    Masses are nonnegative and sum to 1 (renormalized within 1e-9).
    """
    nodes: np.ndarray
    cell_masses: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        masses = np.asarray(self.cell_masses, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise InvalidArgumentError("Grid needs at least two nodes")
        if not np.all(np.isfinite(nodes)):
            raise InvalidArgumentError("Grid nodes must be finite")
        if np.any(np.diff(nodes) <= 0):
            raise InvalidArgumentError("Grid nodes must be strictly increasing")
        if masses.shape != (len(nodes) - 1,):
            raise InvalidArgumentError(
                f"Expected {len(nodes) - 1} cell masses, got {masses.shape}"
            )
        if np.any(masses < 0) or not np.all(np.isfinite(masses)):
            raise InvalidArgumentError("Cell masses must be finite and nonnegative")
        total = masses.sum()
        if abs(total - 1.0) > 1e-9:
            raise InvalidArgumentError(f"Cell masses sum to {total}, expected 1")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "cell_masses", masses / total)

    @property
    def cells(self) -> int:
        return len(self.cell_masses)

    @property
    def left(self) -> np.ndarray:
        return self.nodes[:-1]

    @property
    def right(self) -> np.ndarray:
        return self.nodes[1:]

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    @property
    def densities(self) -> np.ndarray:
        return self.cell_masses / self.widths

    @property
    def is_uniform(self) -> bool:
        w = self.widths
        return bool(np.allclose(w, w[0], rtol=1e-9, atol=0.0))

    def moment(self, k: int) -> float:
        a, b = self.left, self.right
        return float(np.sum(self.densities * (b ** (k + 1) - a ** (k + 1)) / (k + 1)))

    def with_masses(self, masses: np.ndarray) -> "GridMeasure":
        return GridMeasure(self.nodes, masses)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "node_left": self.left.tolist(),
            "node_right": self.right.tolist(),
            "mass": self.cell_masses.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridMeasure":
        left = np.asarray(data["node_left"], dtype=float)
        right = np.asarray(data["node_right"], dtype=float)
        if left.size == 0 or not np.allclose(left[1:], right[:-1], rtol=0.0, atol=0.0):
            raise InvalidArgumentError("Cells must be contiguous")
        return cls(np.append(left, right[-1]), np.asarray(data["mass"], dtype=float))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dict(), columns=GRID_COLUMNS)


def empirical_from_spectrum(spectrum: Union[Spectrum, Iterable[float]], scale: float = 1.0) -> EmpiricalMeasure:
    """
    Empirical spectral distribution of a spectrum scaled by `scale`.

    Args:
        spectrum: Spectrum (or raw eigenvalues)
        scale: Positive factor applied to every eigenvalue

    Returns:
        EmpiricalMeasure with atoms values * scale
    """
    if scale <= 0:
        raise InvalidArgumentError(f"scale must be positive, got {scale}")
    values = spectrum.values if isinstance(spectrum, Spectrum) else np.asarray(list(spectrum))
    if len(values) == 0:
        raise InvalidArgumentError("Empty spectrum")
    return EmpiricalMeasure(np.asarray(values) * scale)


def discretize_law(
    law: ReferenceLaw,
    cells: int,
    lo: Optional[float] = None,
    hi: Optional[float] = None,
) -> GridMeasure:
    """
    Grid measure with the exact cell masses of a real, atomless law.

    Args:
        law: Reference law
        cells: Number of uniform cells
        lo, hi: Grid range, defaults to the law's support

    Returns:
        GridMeasure
    """
    if law.is_planar or law.atoms():
        raise UnsupportedError(f"{law.kind} law cannot be carried by a grid measure")
    if cells < 1:
        raise InvalidArgumentError(f"cells must be positive, got {cells}")
    s_lo, s_hi = law.support()
    lo = s_lo if lo is None else lo
    hi = s_hi if hi is None else hi
    nodes = np.linspace(lo, hi, cells + 1)
    masses = np.clip(np.diff(cdf(law, nodes)), 0.0, None)
    return GridMeasure(nodes, masses / masses.sum())


def uniform_grid_measure(lo: float, hi: float, cells: int) -> GridMeasure:
    """Uniform probability measure on [lo, hi]."""
    return GridMeasure(np.linspace(lo, hi, cells + 1), np.full(cells, 1.0 / cells))


def write_grid_measure_csv(mu: GridMeasure, path: Union[str, Path], header: Iterable[str] = ()) -> None:
    """Write `node_left,node_right,mass` rows, preceded by `#` comment lines."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for line in header:
            handle.write(f"# {line}\n")
        mu.to_frame().to_csv(handle, index=False, lineterminator="\n")


def read_grid_measure_csv(path: Union[str, Path]) -> GridMeasure:
    frame = pd.read_csv(path, comment="#")
    missing = [c for c in GRID_COLUMNS if c not in frame.columns]
    if missing:
        raise InvalidArgumentError(f"Grid measure CSV is missing columns {missing}")
    return GridMeasure.from_dict({c: frame[c].to_numpy() for c in GRID_COLUMNS})
