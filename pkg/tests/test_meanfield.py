"""Characteristic solver, Burgers residuals and the stationary OU law."""

import math

import numpy as np
import pytest
from scipy import integrate

from rmt_lab.config.settings import Settings, set_settings
from rmt_lab.core.exceptions import InvalidArgumentError, NoConvergenceError, StencilError
from rmt_lab.core.rng import RngStream
from rmt_lab.dynamics import SdeConfig, simulate
from rmt_lab.meanfield import (
    CharacteristicQuery,
    burgers_residual,
    dyson_scaling_check,
    frozen_semicircle,
    mean_field_value,
    ou_longtime,
    solve_characteristic,
    stationary_residual,
)
from rmt_lab.measures import ReferenceLaw, discretize_law, uniform_grid_measure
from rmt_lab.measures.empirical import empirical_from_spectrum
from rmt_lab.measures.transforms import StieltjesField, semicircle_stieltjes, stieltjes

DIRAC = StieltjesField.dirac(0.0)


def upper_grid(count, seed):
    rng = RngStream(seed)
    return rng.uniform(-3.0, 3.0, count) + 1j * rng.uniform(0.1, 3.0, count)


class TestQuery:
    def test_rejects_real_point(self):
        with pytest.raises(InvalidArgumentError):
            CharacteristicQuery(DIRAC, 1.0, 0.5)

    def test_rejects_nonpositive_time(self):
        with pytest.raises(InvalidArgumentError):
            CharacteristicQuery(DIRAC, 0.0, 1j)

    def test_ou_needs_theta(self):
        with pytest.raises(InvalidArgumentError):
            CharacteristicQuery(DIRAC, 1.0, 1j, flow="ou")

    def test_unknown_flow(self):
        with pytest.raises(InvalidArgumentError):
            CharacteristicQuery(DIRAC, 1.0, 1j, flow="heat")


class TestCharacteristics:
    def test_dyson_from_dirac_is_semicircle(self):
        value = mean_field_value(DIRAC, 1.0, 3j)
        assert abs(value - semicircle_stieltjes(3j)) < 1e-10

    def test_functional_equation(self):
        for z in upper_grid(100, 211):
            s = mean_field_value(DIRAC, 1.0, z)
            assert abs(s * s - z * s + 1.0) < 1e-10

    def test_foot_stays_in_upper_half_plane(self):
        for z in upper_grid(50, 223):
            assert solve_characteristic(CharacteristicQuery(DIRAC, 1.0, z)).r.imag > 0

    def test_small_time_returns_initial_transform(self):
        initial = StieltjesField.semicircle()
        z = 0.4 + 0.8j
        assert abs(mean_field_value(initial, 1e-10, z) - initial(z)) < 1e-8

    def test_weak_ou_matches_dyson(self):
        z = 0.5 + 1.0j
        dyson = mean_field_value(DIRAC, 1.0, z)
        ou = mean_field_value(DIRAC, 1.0, z, flow="ou", theta=1e-8)
        assert abs(ou - dyson) < 1e-6

    def test_grid_measure_start(self):
        mu = discretize_law(ReferenceLaw.semicircle(), 400)
        value = mean_field_value(StieltjesField.from_measure(mu), 0.5, 1.0 + 1.5j)
        expected = semicircle_stieltjes(1.0 + 1.5j, 2.0 * math.sqrt(1.5))
        assert abs(value - expected) < 1e-3

    def test_iteration_cap_raises_with_best_estimate(self):
        settings = Settings()
        settings.solver.newton_max_iters = 0
        set_settings(settings)
        with pytest.raises(NoConvergenceError) as info:
            mean_field_value(DIRAC, 1.0, 3j)
        assert info.value.best == 3j


class TestScaling:
    def test_dyson_scaling_at_t4(self):
        lhs, rhs = dyson_scaling_check(4j, 4.0)
        expected = 0.5j * (1.0 - math.sqrt(2.0))
        assert abs(lhs - expected) < 1e-10
        assert abs(rhs - expected) < 1e-10

    def test_dyson_scaling_at_t1(self):
        lhs, rhs = dyson_scaling_check(3j, 1.0)
        assert abs(lhs - rhs) < 1e-10

    def test_dyson_scaling_on_grid(self):
        rng = RngStream(227)
        for z in upper_grid(40, 229):
            t = float(rng.uniform(0.1, 5.0))
            lhs, rhs = dyson_scaling_check(z, t)
            assert abs(lhs - rhs) < 1e-9


class TestOuLongTime:
    def test_matches_semicircle_of_radius_two(self):
        z = 0.3 + 0.7j
        law_density = lambda y: math.sqrt(4.0 - y * y) / (2.0 * math.pi)  # noqa: E731
        real, _ = integrate.quad(lambda y: (law_density(y) / (z - y)).real, -2.0, 2.0, epsabs=1e-13)
        imag, _ = integrate.quad(lambda y: (law_density(y) / (z - y)).imag, -2.0, 2.0, epsabs=1e-13)
        assert abs(ou_longtime(0.5, z) - complex(real, imag)) < 1e-8
        assert abs(ou_longtime(0.5, z) - stieltjes(ReferenceLaw.ou_limit(0.5), z)) < 1e-8

    def test_far_field(self):
        z = 50j
        assert abs(ou_longtime(0.5, z) - 1.0 / z) <= 0.02 * abs(1.0 / z)

    def test_flow_approaches_long_time_limit(self):
        value = mean_field_value(DIRAC, 12.0, 1j, flow="ou", theta=1.0)
        assert abs(value - ou_longtime(1.0, 1j)) < 1e-4

    def test_rejects_bad_arguments(self):
        with pytest.raises(InvalidArgumentError):
            ou_longtime(0.0, 1j)
        with pytest.raises(InvalidArgumentError):
            ou_longtime(1.0, 2.0)


class TestBurgersResidual:
    def test_dyson_solution(self):
        assert burgers_residual("dyson", DIRAC, 0.5, 2j) < 1e-6

    def test_ou_solution(self):
        assert burgers_residual("ou", DIRAC, 0.5, 2j, theta=1.0) < 1e-6

    def test_frozen_semicircle_is_not_a_solution(self):
        assert burgers_residual("dyson", DIRAC, 0.5, 1j, solution=frozen_semicircle) > 1e-2

    def test_stencil_must_stay_off_axis(self):
        with pytest.raises(StencilError):
            burgers_residual("dyson", DIRAC, 0.5, 0.3 + 1e-4j)

    def test_stencil_needs_positive_times(self):
        with pytest.raises(StencilError):
            burgers_residual("dyson", DIRAC, 5e-5, 1j)


class TestStationaryResidual:
    def test_ou_limit_is_stationary(self):
        mu = discretize_law(ReferenceLaw.ou_limit(0.5), 256)
        assert stationary_residual(mu, 0.5) < 5e-3

    def test_uniform_law_is_not_stationary(self):
        assert stationary_residual(uniform_grid_measure(-1.0, 1.0, 128), 0.5) > 0.05

    def test_rejects_theta(self):
        with pytest.raises(InvalidArgumentError):
            stationary_residual(uniform_grid_measure(-1.0, 1.0, 16), 0.0)

    def test_edge_cells_only_margin(self):
        assert stationary_residual(uniform_grid_measure(-1.0, 1.0, 128), 0.5, margin=0.0) > 0.05
        # only the middle cell is interior, and H vanishes there by symmetry
        assert stationary_residual(uniform_grid_measure(-1.5, 1.5, 3), 0.5, margin=0.0) < 1e-12

    def test_needs_interior_cells(self):
        with pytest.raises(InvalidArgumentError):
            stationary_residual(uniform_grid_measure(-1.0, 1.0, 2), 0.5, margin=0.0)
        with pytest.raises(InvalidArgumentError):
            stationary_residual(uniform_grid_measure(-1.0, 1.0, 16), 0.5, margin=0.5)


@pytest.mark.slow
def test_particle_transform_tracks_mean_field():
    # Dyson zero start at t = 1 against the semicircle transform
    n, trials = 256, 50
    points = np.array([0.5 + 1.0j, -1.0 + 0.5j, 2j])
    gaps = np.zeros(len(points))
    for i in range(trials):
        record = simulate(SdeConfig.dyson(n, beta=2), RngStream(233, i))
        mu = empirical_from_spectrum(record.final.positions)
        gaps += [abs(stieltjes(mu, z) - semicircle_stieltjes(z)) for z in points]
    assert np.all(gaps / trials < 0.05)
