"""
Configuration Management for the RMT Lab

This module provides configuration management with environment variable support,
validation, and default values for samplers, quadrature, particle simulation,
solvers and batch runs.
"""

import os
from typing import Optional, Dict, Any, Tuple
from dataclasses import dataclass, field
from dotenv import load_dotenv


@dataclass
class SamplingConfig:
    """Matrix sampling and eigen-perturbation configuration."""
    haar_max_retries: int = 8
    haar_min_norm: float = 1e-300
    hadamard_gap_rel_tol: float = 1e-8


@dataclass
class QuadratureConfig:
    """Quadrature, transform and distance configuration."""
    epsabs: float = 1e-12
    epsrel: float = 1e-10
    limit: int = 500
    inversion_eps: Tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4)
    inversion_tol: float = 1e-3
    hilbert_eps: Tuple[float, float] = (1e-3, 5e-4)
    bl_max_points: int = 10_000
    law_grid_cells: int = 2048


@dataclass
class SimulationConfig:
    """Interacting-particle SDE configuration."""
    eps_reg: float = 1e-8
    max_halvings: int = 20
    step_safety: float = 0.25
    bootstrap_fraction: float = 0.01


@dataclass
class SolverConfig:
    """Newton and equilibrium-measure solver configuration."""
    newton_max_iters: int = 100
    newton_tol: float = 1e-12
    equilibrium_tol: float = 1e-10
    equilibrium_step: float = 0.5
    equilibrium_step_floor: float = 1e-12
    equilibrium_step_growth: float = 1.2
    mass_tol: float = 1e-6


@dataclass
class RunDefaults:
    """Batch-run defaults used by the command line."""
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    show_progress: bool = False
    output_dir: str = "."


@dataclass
class Settings:
    """
    Main configuration class for the RMT lab.

    This class manages all configuration settings, loads from environment
    variables, and provides validation and defaults.
    """
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    run: RunDefaults = field(default_factory=RunDefaults)

    debug: bool = False
    log_level: str = "WARNING"

    def __post_init__(self):
        """Load configuration from environment variables after initialization."""
        self.load_from_env()

    def load_from_env(self):
        """Load configuration from environment variables."""
        load_dotenv()

        # Sampling configuration
        if retries := os.getenv("RMT_LAB_HAAR_MAX_RETRIES"):
            self.sampling.haar_max_retries = int(retries)
        if gap_tol := os.getenv("RMT_LAB_HADAMARD_GAP_TOL"):
            self.sampling.hadamard_gap_rel_tol = float(gap_tol)

        # Quadrature configuration
        if limit := os.getenv("RMT_LAB_QUAD_LIMIT"):
            self.quadrature.limit = int(limit)
        if inversion_tol := os.getenv("RMT_LAB_INVERSION_TOL"):
            self.quadrature.inversion_tol = float(inversion_tol)
        if bl_max_points := os.getenv("RMT_LAB_BL_MAX_POINTS"):
            self.quadrature.bl_max_points = int(bl_max_points)
        if law_grid_cells := os.getenv("RMT_LAB_LAW_GRID_CELLS"):
            self.quadrature.law_grid_cells = int(law_grid_cells)

        # Simulation configuration
        if eps_reg := os.getenv("RMT_LAB_EPS_REG"):
            self.simulation.eps_reg = float(eps_reg)
        if max_halvings := os.getenv("RMT_LAB_MAX_HALVINGS"):
            self.simulation.max_halvings = int(max_halvings)
        if step_safety := os.getenv("RMT_LAB_STEP_SAFETY"):
            self.simulation.step_safety = float(step_safety)

        # Solver configuration
        if newton_max_iters := os.getenv("RMT_LAB_NEWTON_MAX_ITERS"):
            self.solver.newton_max_iters = int(newton_max_iters)
        if mass_tol := os.getenv("RMT_LAB_MASS_TOL"):
            self.solver.mass_tol = float(mass_tol)

        # Run configuration
        if threads := os.getenv("RMT_LAB_THREADS"):
            self.run.threads = int(threads)
        if show_progress := os.getenv("RMT_LAB_PROGRESS"):
            self.run.show_progress = show_progress.lower() == "true"
        self.run.output_dir = os.getenv("RMT_LAB_OUTPUT_DIR", self.run.output_dir)

        # General configuration
        self.debug = os.getenv("RMT_LAB_DEBUG", "false").lower() == "true"
        self.log_level = os.getenv("RMT_LAB_LOG_LEVEL", self.log_level)

    def validate(self) -> Dict[str, Any]:
        """
        Validate configuration settings.

        Returns:
            Dictionary with validation results
        """
        errors = []
        warnings = []

        if self.sampling.haar_max_retries < 1:
            errors.append("Haar max retries must be at least 1")

        if self.quadrature.limit < 50:
            warnings.append("Quadrature subdivision limit below 50 may not resolve atoms")

        if any(eps <= 0 for eps in self.quadrature.inversion_eps):
            errors.append("Inversion epsilon sequence must be positive")

        if self.quadrature.bl_max_points < 2:
            errors.append("BL exact-mode point cap must be at least 2")

        if not 0 < self.simulation.step_safety < 1:
            errors.append("Step safety must be in (0, 1)")

        if self.simulation.eps_reg <= 0:
            errors.append("Drift regularization must be positive")

        if self.solver.mass_tol <= 0 or self.solver.mass_tol >= 1:
            errors.append("Support mass tolerance must be in (0, 1)")

        if self.run.threads < 1:
            errors.append("Thread count must be at least 1")

        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            warnings.append(f"Unknown log level '{self.log_level}', WARNING will be used")

        return {
            "valid": len(errors) == 0,
            "errors": errors,
            "warnings": warnings
        }

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert settings to dictionary.

        Returns:
            Dictionary representation of settings
        """
        return {
            "sampling": {
                "haar_max_retries": self.sampling.haar_max_retries,
                "haar_min_norm": self.sampling.haar_min_norm,
                "hadamard_gap_rel_tol": self.sampling.hadamard_gap_rel_tol,
            },
            "quadrature": {
                "epsabs": self.quadrature.epsabs,
                "epsrel": self.quadrature.epsrel,
                "limit": self.quadrature.limit,
                "inversion_eps": list(self.quadrature.inversion_eps),
                "inversion_tol": self.quadrature.inversion_tol,
                "hilbert_eps": list(self.quadrature.hilbert_eps),
                "bl_max_points": self.quadrature.bl_max_points,
                "law_grid_cells": self.quadrature.law_grid_cells,
            },
            "simulation": {
                "eps_reg": self.simulation.eps_reg,
                "max_halvings": self.simulation.max_halvings,
                "step_safety": self.simulation.step_safety,
                "bootstrap_fraction": self.simulation.bootstrap_fraction,
            },
            "solver": {
                "newton_max_iters": self.solver.newton_max_iters,
                "newton_tol": self.solver.newton_tol,
                "equilibrium_tol": self.solver.equilibrium_tol,
                "equilibrium_step": self.solver.equilibrium_step,
                "equilibrium_step_floor": self.solver.equilibrium_step_floor,
                "equilibrium_step_growth": self.solver.equilibrium_step_growth,
                "mass_tol": self.solver.mass_tol,
            },
            "run": {
                "threads": self.run.threads,
                "show_progress": self.run.show_progress,
                "output_dir": self.run.output_dir,
            },
            "debug": self.debug,
            "log_level": self.log_level,
        }


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get the global settings instance.

    Returns:
        Settings instance
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def set_settings(settings: Optional[Settings]):
    """
    Set the global settings instance.

    Args:
        settings: Settings instance to set as global, or None to reload lazily
    """
    global _settings
    _settings = settings
