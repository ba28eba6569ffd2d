"""
Command Implementations

Each command turns a validated RunConfig into a data table with frozen
columns and a JSON summary. `run` writes both and maps library errors to
exit codes.
"""

import json
import logging
import math
import sys
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
import pandas as pd

from .. import __version__
from ..core.ensembles import sample_matrix, spectrum_of
from ..core.exceptions import RmtLabError
from ..core.rng import RngStream
from ..dynamics.sde import SdeConfig, simulate
from ..kernels.dpp import KernelSpec, correlation_det, kernel, kernel_trace
from ..kernels.ginibre import GumbelRescale, hole_probability, sample_spectral_radius
from ..ldp.energy import energy_H, frostman_residual
from ..ldp.equilibrium import solve_equilibrium
from ..measures.distances import bl_distance_with_mode, ks_distance, ks_distance_samples, radial_ks_circular
from ..measures.empirical import EmpiricalMeasure
from ..measures.laws import ReferenceLaw, density
from ..measures.transforms import StieltjesField, stieltjes
from ..meanfield.characteristics import burgers_residual, dyson_scaling_check, mean_field_value, ou_longtime
from ..utils.helpers import TrialRunner, to_jsonable, write_json, write_table
from .schema import (
    BurgersParams,
    DysonParams,
    EsdParams,
    GumbelParams,
    HoleProbParams,
    KernelParams,
    LdpParams,
    RunConfig,
    SampleParams,
)

logger = logging.getLogger(__name__)

CommandResult = Tuple[pd.DataFrame, Dict[str, Any]]

PROBE_POINTS = (1j, 2j, 1 + 1j)
HISTOGRAM_MARGIN = 0.1


def _rescaled_spectrum(ensemble: str, n: int, m, rng: RngStream, rescale: bool = True) -> np.ndarray:
    spectrum = spectrum_of(sample_matrix(ensemble, n, rng, m))
    if rescale and ensemble in ("gue", "goe", "ginibre"):
        spectrum = spectrum.rescaled(1.0 / math.sqrt(n))
    return spectrum.values


def run_sample(config: RunConfig, p: SampleParams, runner: TrialRunner) -> CommandResult:
    spectra = runner.run(
        config.trials, lambda rng: _rescaled_spectrum(p.ensemble, p.n, p.m, rng, p.rescale), desc="sample"
    )
    frames = []
    for trial, values in enumerate(spectra):
        values = np.asarray(values, dtype=complex)
        frames.append(pd.DataFrame({
            "trial": trial,
            "index": np.arange(len(values)),
            "re": values.real,
            "im": values.imag,
        }))
    pooled = np.concatenate([np.abs(v) for v in spectra])
    summary = {
        "eigenvalues": int(pooled.size),
        "mean_abs_square": float(np.mean(pooled ** 2)),
        "max_abs": float(np.max(pooled)),
    }
    return pd.concat(frames, ignore_index=True), summary


def _esd_law(p: EsdParams) -> ReferenceLaw:
    if p.ref == "semicircle":
        default = 2.0 if p.ensemble == "gue" else math.sqrt(2.0)
        return ReferenceLaw.semicircle(p.radius or default)
    if p.ref == "marchenko_pastur":
        return ReferenceLaw.marchenko_pastur(p.n / (p.m or p.n))
    return ReferenceLaw.circular()


def _histogram(values: np.ndarray, lo: float, hi: float, bins: int, reference: Callable) -> pd.DataFrame:
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    widths = np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return pd.DataFrame({
        "bin_left": edges[:-1],
        "bin_right": edges[1:],
        "density": counts / (len(values) * widths),
        "reference_density": reference(mids),
    })


def run_esd(config: RunConfig, p: EsdParams, runner: TrialRunner) -> CommandResult:
    law = _esd_law(p)
    spectra = runner.run(config.trials, lambda rng: _rescaled_spectrum(p.ensemble, p.n, p.m, rng), desc="esd")

    if law.kind == "circular":
        checks = [radial_ks_circular(values) for values in spectra]
        squares = np.concatenate([np.abs(v) ** 2 for v in spectra])
        table = _histogram(squares, 0.0, 1.0 + 5 * HISTOGRAM_MARGIN, p.bins, lambda r2: np.where(r2 <= 1.0, 1.0, 0.0))
        summary = {
            "radial_ks": float(np.mean([gap for gap, _ in checks])),
            "inside_fraction": float(np.mean([inside for _, inside in checks])),
        }
        return table, summary

    measures = [EmpiricalMeasure(values) for values in spectra]
    bl = [bl_distance_with_mode(mu, law) for mu in measures]
    ks = [ks_distance(mu, law) for mu in measures]
    lo, hi = law.support()
    pad = HISTOGRAM_MARGIN * (hi - lo)
    table = _histogram(np.concatenate(spectra), lo - pad, hi + pad, p.bins, lambda x: density(law, x))
    summary = {
        "bl_distance": float(np.mean([d.value for d in bl])),
        "bl_distance_max": float(np.max([d.value for d in bl])),
        "bl_mode": sorted({d.mode for d in bl}),
        "ks_distance": float(np.mean(ks)),
    }
    return table, summary


def run_kernel(config: RunConfig, p: KernelParams, runner: TrialRunner) -> CommandResult:
    kspec = KernelSpec(p.family, p.n)
    if kspec.is_planar:
        points: List = [complex(re, im) for re, im in p.points]
    else:
        points = [float(re) for re, _ in p.points]
    rows = []
    for x in points:
        for y in points:
            value = complex(kernel(kspec, x, y))
            rows.append((complex(x).real, complex(x).imag, complex(y).real, complex(y).imag, value.real, value.imag))
    table = pd.DataFrame(rows, columns=["x_re", "x_im", "y_re", "y_im", "re_K", "im_K"])
    summary: Dict[str, Any] = {"correlation_det": correlation_det(kspec, points)}
    if kspec.family != "ginibre_infinite":
        summary["trace"] = kernel_trace(kspec)
    return table, summary


def _sde_config(p: DysonParams) -> SdeConfig:
    record_times = tuple(p.t_end * (k + 1) / p.records for k in range(p.records))
    return SdeConfig(
        family=p.family,
        n=p.n,
        dt_max=p.dt_max,
        t_end=p.t_end,
        record_times=record_times,
        beta=p.beta if p.family == "dyson" else None,
        alpha=p.alpha if p.family == "generalized" else None,
        beta_n=p.beta_n if p.family == "generalized" else None,
        theta=p.theta if p.family == "ou" else None,
        m=(p.m or p.n) if p.family == "wishart" else None,
    )


def run_dyson(config: RunConfig, p: DysonParams, runner: TrialRunner) -> CommandResult:
    sde = _sde_config(p)
    records = runner.run(config.trials, lambda rng: simulate(sde, rng), desc="trajectories")
    frames = []
    for trial, record in enumerate(records):
        frame = record.to_frame()
        frame.insert(0, "trial", trial)
        frames.append(frame)

    summary: Dict[str, Any] = {
        "min_gap": float(min(r.diagnostics.min_gap for r in records)),
        "rejections": int(sum(r.diagnostics.rejections for r in records)),
        "steps": int(sum(r.diagnostics.steps for r in records)),
    }
    if p.family in ("dyson", "ou"):
        start = StieltjesField.dirac(0.0)
        probes = []
        for z in PROBE_POINTS:
            observed = np.mean([stieltjes(EmpiricalMeasure(r.final.positions), z) for r in records])
            expected = mean_field_value(start, p.t_end, z, p.family, p.theta)
            probes.append({"z": z, "observed": complex(observed), "mean_field": expected,
                           "gap": float(abs(observed - expected))})
        summary["stieltjes"] = probes
    return pd.concat(frames, ignore_index=True), summary


def run_burgers(config: RunConfig, p: BurgersParams, runner: TrialRunner) -> CommandResult:
    start = StieltjesField.dirac(0.0) if p.initial == "dirac" else StieltjesField.semicircle(2.0)
    rows = []
    for t in p.t:
        for re, im in p.z:
            z = complex(re, im)
            value = mean_field_value(start, t, z, p.flow, p.theta)
            residual = burgers_residual(p.flow, start, t, z, p.h, p.theta)
            rows.append((t, re, im, value.real, value.imag, residual))
    table = pd.DataFrame(rows, columns=["t", "re_z", "im_z", "re_S", "im_S", "residual"])
    summary: Dict[str, Any] = {"max_residual": float(table["residual"].max())}
    if p.flow == "dyson" and p.initial == "dirac":
        gaps = [abs(lhs - rhs) for lhs, rhs in (dyson_scaling_check(complex(re, im), t) for t in p.t for re, im in p.z)]
        summary["max_scaling_gap"] = float(max(gaps))
    if p.flow == "ou":
        t_last = max(p.t)
        summary["longtime_gap"] = float(max(
            abs(mean_field_value(start, t_last, complex(re, im), "ou", p.theta) - ou_longtime(p.theta, complex(re, im)))
            for re, im in p.z
        ))
    return table, summary


def run_ldp(config: RunConfig, p: LdpParams, runner: TrialRunner) -> CommandResult:
    measure, report = solve_equilibrium(p.beta, p.grid_cells, p.iters)
    summary = {
        "solver": report.to_dict(),
        "energy": energy_H(measure, p.beta).to_dict(),
        "frostman": frostman_residual(measure, p.beta).to_dict(),
    }
    return measure.to_frame(), summary


def run_holeprob(config: RunConfig, p: HoleProbParams, runner: TrialRunner) -> CommandResult:
    rows, tails = [], []
    for r in p.r:
        log_prob, tail = hole_probability(r, p.truncation)
        rows.append((r, log_prob, log_prob / r ** 4))
        tails.append(tail)
    table = pd.DataFrame(rows, columns=["r", "log_prob", "log_prob_over_r4"])
    return table, {"tail_bounds": tails, "limit": -0.25}


def run_gumbel(config: RunConfig, p: GumbelParams, runner: TrialRunner) -> CommandResult:
    rescale = GumbelRescale(p.n)
    rho = np.asarray(runner.run(config.trials, lambda rng: sample_spectral_radius(p.n, rng), desc="spectral radius"))
    rescaled = rescale.apply(rho)
    table = pd.DataFrame({"trial": np.arange(len(rho)), "rho": rho, "rescaled": rescaled})
    summary = {
        "ks_distance": ks_distance_samples(rescaled, ReferenceLaw.gumbel()),
        "kappa": rescale.kappa,
        "center": rescale.center,
        "scale": rescale.scale,
    }
    return table, summary


COMMANDS: Dict[str, Callable[..., CommandResult]] = {
    "sample": run_sample,
    "esd": run_esd,
    "kernel": run_kernel,
    "dyson": run_dyson,
    "burgers": run_burgers,
    "ldp": run_ldp,
    "holeprob": run_holeprob,
    "gumbel": run_gumbel,
}


def execute(config: RunConfig) -> CommandResult:
    """Run a command and return its table and summary without writing files."""
    runner = TrialRunner(config.seed, config.threads)
    logger.info("Running %s (seed %d, %d trials)", config.command, config.seed, config.trials)
    return COMMANDS[config.command](config, config.typed_params(), runner)


def write_outputs(config: RunConfig, table: pd.DataFrame, summary: Dict[str, Any]) -> List[str]:
    document = {"version": __version__, "config": config.echo(), "summary": to_jsonable(summary)}
    written = []
    if config.format == "csv":
        written.append(str(write_table(table, config.out + ".csv", {"version": __version__, "config": config.echo()})))
    else:
        document["rows"] = to_jsonable(table.to_dict(orient="list"))
    written.append(str(write_json(document, config.out + ".json")))
    return written


def report_error(error: RmtLabError) -> int:
    sys.stderr.write(json.dumps(error.to_dict(), sort_keys=True) + "\n")
    return error.exit_code


def run(config: RunConfig) -> int:
    """
    Execute a run and write its outputs.

    Returns:
        0 on success, 2 on validation errors, 3 on numerical failures
    """
    try:
        table, summary = execute(config)
        write_outputs(config, table, summary)
    except RmtLabError as error:
        logger.warning("%s failed: %s", config.command, error)
        return report_error(error)
    return 0
