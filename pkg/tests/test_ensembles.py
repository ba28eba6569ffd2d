"""Matrix samplers, eigensolvers and eigenvalue perturbation formulas."""

import math

import numpy as np
import pytest

from rmt_lab.core.ensembles import (
    HermitianMatrix,
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
from rmt_lab.core.exceptions import DegenerateSpectrumError, InvalidArgumentError
from rmt_lab.core.rng import RngStream
from rmt_lab.measures.distances import bl_distance
from rmt_lab.measures.empirical import EmpiricalMeasure
from rmt_lab.measures.laws import ReferenceLaw


class TestRngStream:
    def test_same_key_same_draws(self):
        a = RngStream(7, 3).normal(size=5)
        b = RngStream(7, 3).normal(size=5)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = RngStream(7, 0).normal(size=5)
        b = RngStream(7, 1).normal(size=5)
        assert not np.array_equal(a, b)

    def test_rejects_out_of_range_seed(self):
        with pytest.raises(InvalidArgumentError):
            RngStream(-1)
        with pytest.raises(InvalidArgumentError):
            RngStream(2**64)


class TestSamplers:
    def test_gue_single_entry(self, test_helpers):
        m = sample_gue(1, test_helpers.forced_rng([0.7]))
        assert m.entries.shape == (1, 1)
        assert m.entries[0, 0] == pytest.approx(0.7)

    def test_gue_is_hermitian(self):
        m = sample_gue(2, RngStream(1)).entries
        assert np.array_equal(m, m.conj().T)
        assert np.all(np.diagonal(m).imag == 0)

    def test_goe_single_entry_and_real(self, test_helpers):
        assert sample_goe(1, test_helpers.forced_rng([-1.2])).entries[0, 0] == pytest.approx(-1.2)
        m = sample_goe(3, RngStream(2))
        assert m.is_real
        assert np.array_equal(m.entries, m.entries.T)

    def test_ginibre_single_entry(self, test_helpers):
        m = sample_ginibre(1, test_helpers.forced_rng([0.3, -0.4]))
        assert m.entries[0, 0] == pytest.approx(0.3 - 0.4j)

    def test_ginibre_streams_differ(self):
        a = sample_ginibre(2, RngStream(5, 0)).entries
        b = sample_ginibre(2, RngStream(5, 1)).entries
        assert not np.array_equal(a, b)

    def test_wishart_single_entry(self, test_helpers):
        m = sample_wishart(1, 1, test_helpers.forced_rng([1.0, 0.0]))
        assert m.entries[0, 0] == pytest.approx(1.0)

    def test_wishart_is_psd(self):
        values = eigenvalues_hermitian(sample_wishart(20, 10, RngStream(3))).values
        assert values.min() >= -1e-10

    @pytest.mark.parametrize("sampler", [sample_gue, sample_goe, sample_ginibre])
    def test_zero_size_rejected(self, sampler):
        with pytest.raises(InvalidArgumentError):
            sampler(0, RngStream(0))

    def test_haar_single_entry_is_phase(self, test_helpers):
        u = sample_haar_unitary(1, test_helpers.forced_rng([0.3, -0.4])).entries
        z = 0.3 - 0.4j
        assert u[0, 0] == pytest.approx(z / abs(z))

    def test_haar_is_unitary(self):
        u = sample_haar_unitary(8, RngStream(11)).entries
        assert np.max(np.abs(u @ u.conj().T - np.eye(8))) <= 1e-12

    def test_gue_offdiagonal_variance(self):
        values = [sample_gue(50, RngStream(13, i)).entries[0, 1].real for i in range(2000)]
        assert 0.44 <= np.var(values) <= 0.56

    @pytest.mark.slow
    def test_gue_offdiagonal_variance_full(self):
        values = [sample_gue(50, RngStream(13, i)).entries[0, 1].real for i in range(10_000)]
        assert 0.47 <= np.var(values) <= 0.53

    @pytest.mark.slow
    def test_goe_diagonal_variance(self):
        values = [sample_goe(50, RngStream(17, i)).entries[0, 0] for i in range(10_000)]
        assert 0.94 <= np.var(values) <= 1.06

    @pytest.mark.slow
    def test_ginibre_entry_power(self):
        values = [np.mean(np.abs(sample_ginibre(64, RngStream(19, i)).entries) ** 2) for i in range(1000)]
        assert 0.98 <= np.mean(values) <= 1.02

    @pytest.mark.slow
    def test_haar_phase_is_uniform(self):
        phases = np.array([np.angle(sample_haar_unitary(8, RngStream(23, i)).entries[0, 0]) for i in range(10_000)])
        uniform = (phases + math.pi) / (2.0 * math.pi)
        ordered = np.sort(uniform)
        n = len(ordered)
        gap = max(np.max(np.arange(1, n + 1) / n - ordered), np.max(ordered - np.arange(n) / n))
        assert gap < 0.02

    @pytest.mark.slow
    def test_wishart_marchenko_pastur(self):
        values = eigenvalues_hermitian(sample_wishart(200, 200, RngStream(29))).values
        assert bl_distance(EmpiricalMeasure(values), ReferenceLaw.marchenko_pastur(1.0)) < 0.05


class TestEigenvalues:
    def test_diagonal(self):
        values = eigenvalues_hermitian(np.diag([3.0, 1.0, 2.0])).values
        assert np.allclose(values, [1.0, 2.0, 3.0])

    def test_swap(self):
        assert np.allclose(eigenvalues_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]])).values, [-1.0, 1.0])

    def test_rescaled_tracks_scale(self):
        spectrum = eigenvalues_hermitian(np.diag([4.0, -2.0])).rescaled(0.5).rescaled(0.5)
        assert np.allclose(spectrum.values, [-0.5, 1.0])
        assert spectrum.scale == pytest.approx(0.25)
        assert spectrum.n == 2

    def test_trace_identity(self):
        m = sample_gue(100, RngStream(31))
        values = eigenvalues_hermitian(m).values
        trace = np.trace(m.entries).real
        assert abs(values.sum() - trace) <= 1e-8 * max(1.0, abs(trace))

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidArgumentError):
            eigenvalues_hermitian(np.array([[np.nan]]))

    def test_complex_diagonal(self):
        values = eigenvalues_complex(np.diag([1j, 2.0])).values
        assert sorted(values, key=lambda z: z.real) == pytest.approx([1j, 2.0])

    def test_nilpotent(self):
        values = eigenvalues_complex(np.array([[0.0, 1.0], [0.0, 0.0]])).values
        assert np.allclose(values, [0.0, 0.0])

    def test_non_square_rejected(self):
        with pytest.raises(InvalidArgumentError):
            eigenvalues_complex(np.zeros((2, 3)))

    def test_ginibre_trace(self):
        m = sample_ginibre(100, RngStream(37)).entries
        values = spectrum_of(sample_ginibre(100, RngStream(37))).values
        assert abs(values.sum() - np.trace(m)) < 1e-6 * np.linalg.norm(m)

    def test_gue_spectrum_is_simple(self):
        for i in range(200):
            values = eigenvalues_hermitian(sample_gue(8, RngStream(41, i))).values
            assert np.min(np.diff(values)) > 0


class TestHadamard:
    def test_two_by_two(self):
        report = hadamard_derivatives(np.diag([0.0, 2.0]), np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(report.first_derivs, [0.0, 0.0])
        assert np.allclose(report.second_derivs, [-1.0, 1.0])

    def test_identity_direction(self):
        a = np.diag([0.0, 1.0, 3.0])
        report = hadamard_derivatives(a, np.eye(3))
        assert np.allclose(report.first_derivs, 1.0)
        assert np.allclose(report.second_derivs, 0.0)

    def test_degenerate_spectrum(self):
        with pytest.raises(DegenerateSpectrumError):
            hadamard_derivatives(np.diag([1.0, 1.0]), np.eye(2))

    def test_finite_differences(self):
        t = 1e-4
        checked = 0
        for i in range(100):
            rng = RngStream(43, i)
            n = 2 + i % 7
            a = sample_gue(n, rng).entries
            b = sample_gue(n, rng).entries
            center = eigenvalues_hermitian(a).values
            if np.min(np.diff(center)) < 0.1:
                continue
            checked += 1
            report = hadamard_derivatives(a, b)
            plus = eigenvalues_hermitian(a + t * b).values
            minus = eigenvalues_hermitian(a - t * b).values
            first_fd = (plus - minus) / (2 * t)
            second_fd = (plus - 2 * center + minus) / t ** 2
            assert np.allclose(report.first_derivs, first_fd, rtol=1e-5, atol=1e-6)
            assert np.allclose(report.second_derivs, second_fd, rtol=1e-3, atol=1e-3)
        assert checked > 10


class TestMatrixPaths:
    def test_hoffman_wielandt(self):
        for i in range(1000):
            rng = RngStream(47, i)
            n = 1 + i % 20
            assert hoffman_wielandt_gap(sample_gue(n, rng), sample_gue(n, rng)) >= -1e-10

    def test_brownian_path_starts_at_zero(self):
        path = hermitian_brownian_motion(4, [0.0, 0.5, 1.0], 2, RngStream(53))
        assert path.shape == (3, 4, 4)
        assert np.all(path[0] == 0)
        assert np.allclose(path[2], path[2].conj().T)

    def test_brownian_path_rejects_beta(self):
        with pytest.raises(InvalidArgumentError):
            hermitian_brownian_motion(4, [1.0], 4, RngStream(0))

    def test_wishart_path_is_psd(self):
        path = wishart_brownian_motion(3, 5, [0.5, 1.0], RngStream(59))
        assert np.linalg.eigvalsh(path[-1]).min() >= -1e-10

    def test_sample_matrix_dispatch(self):
        u = sample_matrix("haar", 3, RngStream(61)).entries
        assert np.allclose(u @ u.conj().T, np.eye(3))
        assert sample_matrix("wishart", 3, RngStream(61), m=5).n == 3
        with pytest.raises(InvalidArgumentError):
            sample_matrix("cue", 3, RngStream(61))

    def test_hermitian_matrix_size(self):
        assert HermitianMatrix(np.eye(3)).n == 3
