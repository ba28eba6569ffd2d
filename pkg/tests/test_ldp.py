"""Energy functional, Selberg integral, equilibrium solver and probes."""

import math

import numpy as np
import pytest

from rmt_lab.config.settings import Settings, set_settings
from rmt_lab.core.exceptions import (
    InvalidArgumentError,
    OverflowGuardError,
    SolverFailureError,
    UnsupportedError,
)
from rmt_lab.core.rng import RngStream
from rmt_lab.ldp import (
    F_constant,
    concentration_variance,
    energy_H,
    energy_H_direct,
    free_entropy,
    frostman_residual,
    largest_eigenvalue_rate,
    largest_eigenvalue_stats,
    ldp_probe,
    log_kernel_matrix,
    rate_function,
    selberg_Z,
    solve_equilibrium,
)
from rmt_lab.measures import GridMeasure, ReferenceLaw, discretize_law, uniform_grid_measure


class TestFreeEntropy:
    def test_uniform_unit_interval(self):
        assert free_entropy(uniform_grid_measure(0.0, 1.0, 1)) == pytest.approx(-1.5, abs=1e-12)
        assert free_entropy(uniform_grid_measure(0.0, 1.0, 64)) == pytest.approx(-1.5, abs=1e-10)

    def test_nonuniform_nodes(self):
        mu = GridMeasure(np.array([0.0, 0.1, 0.5, 1.0]), np.array([0.1, 0.4, 0.5]))
        assert free_entropy(mu) == pytest.approx(-1.5, abs=1e-10)

    def test_kernel_matrix_quadratic_form(self):
        mu = discretize_law(ReferenceLaw.semicircle(), 40)
        a = log_kernel_matrix(mu)
        assert np.allclose(a, a.T)
        assert mu.cell_masses @ a @ mu.cell_masses == pytest.approx(free_entropy(mu), rel=1e-10)

    def test_semicircle(self):
        # log energy of the radius-2 semicircle is -1/4
        assert free_entropy(discretize_law(ReferenceLaw.semicircle(), 1024)) == pytest.approx(-0.25, abs=1e-3)

    def test_cell_cap(self):
        with pytest.raises(InvalidArgumentError):
            free_entropy(uniform_grid_measure(0.0, 1.0, 4097))


class TestEnergy:
    def test_F_constant(self):
        assert F_constant(2.0) == pytest.approx(-0.75)
        assert F_constant(1.0) == pytest.approx(0.25 * math.log(0.5) - 0.375)
        with pytest.raises(InvalidArgumentError):
            F_constant(0.0)

    @pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
    def test_minimum_at_beta_semicircle(self, beta):
        mu = discretize_law(ReferenceLaw.semicircle_beta(beta), 1024)
        breakdown = energy_H(mu, beta)
        assert breakdown.H_beta == pytest.approx(-F_constant(beta), abs=1e-3)
        assert abs(breakdown.I_beta) < 1e-3

    def test_direct_assembly_agrees(self):
        mu = discretize_law(ReferenceLaw.semicircle_beta(2.0), 200)
        assert energy_H_direct(mu, 2.0) == pytest.approx(energy_H(mu, 2.0).H_beta, rel=1e-10)

    def test_rate_is_nonnegative(self):
        rng = RngStream(307)
        for _ in range(20):
            lo = float(rng.uniform(-4.0, -0.5))
            hi = float(rng.uniform(0.5, 4.0))
            masses = rng.uniform(0.0, 1.0, 64)
            mu = GridMeasure(np.linspace(lo, hi, 65), masses / masses.sum())
            assert rate_function(mu, 1.0) >= -1e-9

    def test_breakdown_dict(self):
        data = energy_H(uniform_grid_measure(-1.0, 1.0, 8), 1.0).to_dict()
        assert data["H_beta"] == pytest.approx(data["I_beta"] - data["F_beta"])


class TestSelberg:
    def test_single_particle(self):
        assert selberg_Z(1, 2.0) == pytest.approx(0.5 * math.log(2.0 * math.pi), rel=1e-12)

    def test_two_particles(self):
        assert selberg_Z(2, 2.0) == pytest.approx(math.log(math.pi), rel=1e-12)
        # |x - y| exp(-x^2 - y^2) integrates to sqrt(2 pi)
        assert selberg_Z(2, 1.0) == pytest.approx(0.5 * math.log(2.0 * math.pi), rel=1e-12)

    @pytest.mark.parametrize("beta", [1.0, 2.0])
    def test_approaches_F(self, beta):
        gaps = [abs(selberg_Z(n, beta) / n ** 2 - F_constant(beta)) for n in (10, 100, 1000)]
        for n, gap in zip((10, 100, 1000), gaps):
            assert gap <= 2.0 * math.log(n) / n
        assert gaps[0] > gaps[1] > gaps[2]

    def test_overflow_guard(self):
        selberg_Z(10_000, 2.0)
        with pytest.raises(OverflowGuardError):
            selberg_Z(10_001, 2.0)


class TestFrostman:
    def test_semicircle_satisfies_conditions(self):
        mu = discretize_law(ReferenceLaw.semicircle_beta(1.0), 512)
        report = frostman_residual(mu, 1.0)
        assert report.residual_sup < 1e-2
        assert report.inequality_violations == 0
        assert report.support_cells == 512

    def test_uniform_fails(self):
        assert frostman_residual(uniform_grid_measure(-1.0, 1.0, 128), 1.0).residual_sup > 0.05

    def test_needs_two_support_cells(self):
        mu = GridMeasure(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.0]))
        with pytest.raises(InvalidArgumentError):
            frostman_residual(mu, 1.0)


class TestEquilibrium:
    def test_recovers_semicircle(self):
        measure, report = solve_equilibrium(2.0, 128)
        assert report.final_energy == pytest.approx(-F_constant(2.0), abs=5e-3)
        assert report.bl_distance_to_sigma_beta < 0.05
        assert report.edges[0] == pytest.approx(-2.0, abs=0.15)
        assert report.edges[1] == pytest.approx(2.0, abs=0.15)
        assert measure.cell_masses.sum() == pytest.approx(1.0)

    def test_energy_trace_decreases(self):
        _, report = solve_equilibrium(1.0, 64, max_iters=200)
        assert all(a > b for a, b in zip(report.energy_trace, report.energy_trace[1:]))

    def test_report_dict(self):
        _, report = solve_equilibrium(1.0, 32, max_iters=20)
        data = report.to_dict()
        assert data["target_energy"] == pytest.approx(-F_constant(1.0))
        assert data["iterations"] <= 20

    def test_grid_must_cover_support(self):
        with pytest.raises(InvalidArgumentError):
            solve_equilibrium(2.0, np.linspace(-1.0, 1.0, 33))
        with pytest.raises(InvalidArgumentError):
            solve_equilibrium(-1.0)

    def test_stalled_descent_raises(self):
        settings = Settings()
        settings.solver.equilibrium_step = 1e6
        settings.solver.equilibrium_step_floor = 1e5
        set_settings(settings)
        with pytest.raises(SolverFailureError) as info:
            solve_equilibrium(2.0, 64)
        assert "trace_tail" in info.value.to_dict()


class TestProbes:
    def test_no_large_deviation_observed(self):
        assert ldp_probe(2, 20, 10, 0.5, seed=3, threads=1) == (-math.inf, 0)

    def test_every_trial_deviates_at_tiny_epsilon(self):
        log_freq, count = ldp_probe(2, 20, 10, 1e-9, seed=3, threads=1)
        assert count == 10
        assert log_freq == pytest.approx(0.0)

    def test_unsupported_beta(self):
        with pytest.raises(UnsupportedError):
            ldp_probe(4, 10, 5, 0.1)

    def test_largest_eigenvalue_rate(self):
        edge = math.sqrt(2.0)
        assert largest_eigenvalue_rate(edge) == pytest.approx(0.0, abs=1e-10)
        assert largest_eigenvalue_rate(1.0) == math.inf
        assert 0.0 < largest_eigenvalue_rate(1.6) < largest_eigenvalue_rate(2.0)

    def test_concentration_variance(self):
        n = 50
        assert concentration_variance(n, 400, seed=5, threads=1) == pytest.approx(1.0 / n ** 2, rel=0.25)

    def test_largest_eigenvalue_near_edge(self):
        stats = largest_eigenvalue_stats(100, 50, seed=7, threads=1)
        assert stats.gap_to_edge < 0.15
        assert stats.to_dict()["trials"] == 50

    @pytest.mark.slow
    def test_largest_eigenvalue_moves_to_edge(self):
        small = largest_eigenvalue_stats(50, 200, seed=11)
        large = largest_eigenvalue_stats(400, 200, seed=11)
        assert large.gap_to_edge < small.gap_to_edge
        assert large.std < small.std
