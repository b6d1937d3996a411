"""Tests for random sampling and chi-square special functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from pilotguard.numerics import (
    chi2_even_cdf,
    chi2_even_pdf,
    chi2_even_quantile,
    hermitian_inner,
    make_stream,
    sample_cscg,
    substream,
)


class TestStreams:
    """Deterministic stream construction and substream derivation."""

    def test_same_seed_same_sequence(self):
        a = make_stream(42).standard_normal(16)
        b = make_stream(42).standard_normal(16)
        np.testing.assert_array_equal(a, b)

    def test_different_seeds_differ(self):
        a = make_stream(1).standard_normal(16)
        b = make_stream(2).standard_normal(16)
        assert not np.array_equal(a, b)

    def test_substream_deterministic(self):
        a = substream(7, 3, 1).standard_normal(8)
        b = substream(7, 3, 1).standard_normal(8)
        np.testing.assert_array_equal(a, b)

    def test_substream_paths_independent(self):
        a = substream(7, 0, 0).standard_normal(8)
        b = substream(7, 0, 1).standard_normal(8)
        c = substream(7, 1, 0).standard_normal(8)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert not np.array_equal(b, c)

    def test_negative_seed_accepted(self):
        a = make_stream(-5).standard_normal(4)
        b = make_stream(-5).standard_normal(4)
        np.testing.assert_array_equal(a, b)


class TestSampleCscg:
    """Circularly symmetric complex Gaussian sampling."""

    def test_zero_variance_gives_zero_vector(self):
        out = sample_cscg(make_stream(0), 4, 0.0)
        assert out.shape == (4,)
        np.testing.assert_array_equal(out, np.zeros(4, dtype=complex))

    def test_unit_variance_moment(self):
        draws = sample_cscg(make_stream(123), (10**5, 4), 1.0)
        mean_sq = np.mean(np.abs(draws) ** 2)
        assert 0.99 <= mean_sq <= 1.01

    def test_fixed_seed_reproducible(self):
        a = sample_cscg(make_stream(42), 4, 1.0)
        b = sample_cscg(make_stream(42), 4, 1.0)
        np.testing.assert_array_equal(a, b)

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            sample_cscg(make_stream(0), 4, -1.0)

    def test_bad_dimension_rejected(self):
        with pytest.raises(ValueError):
            sample_cscg(make_stream(0), 0, 1.0)

    def test_real_imag_split(self):
        draws = sample_cscg(make_stream(9), 10**5, 2.0)
        assert abs(np.var(draws.real) - 1.0) < 0.03
        assert abs(np.var(draws.imag) - 1.0) < 0.03

    def test_empirical_covariance(self):
        variance = 2.0
        draws = sample_cscg(make_stream(17), (10**5, 4), variance)
        gram = draws.conj().T @ draws / draws.shape[0]
        for i in range(4):
            assert abs(gram[i, i].real - variance) <= 0.03 * variance
            for j in range(4):
                if i != j:
                    assert abs(gram[i, j]) <= 0.02 * variance


class TestHermitianInner:
    """Conjugate-linear inner product."""

    def test_self_inner_is_norm_squared(self):
        assert hermitian_inner(np.array([1, 1j]), np.array([1, 1j])) == 2

    def test_orthogonal(self):
        assert hermitian_inner(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0

    def test_first_argument_conjugated(self):
        out = hermitian_inner(np.array([1j, 0.0]), np.array([1.0, 0.0]))
        assert out == -1j

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            hermitian_inner(np.zeros(2), np.zeros(3))

    @given(st.integers(min_value=1, max_value=8), st.integers())
    @settings(max_examples=25, deadline=None)
    def test_self_inner_real_nonnegative(self, dim, seed):
        vec = sample_cscg(make_stream(seed), dim, 1.0)
        val = hermitian_inner(vec, vec)
        assert abs(val.imag) < 1e-12
        assert val.real >= 0.0
        assert math.isclose(val.real, float(np.linalg.norm(vec) ** 2), rel_tol=1e-12)


class TestChi2EvenCdf:
    """Closed-form chi-square CDF for even degrees of freedom."""

    def test_zero_at_origin(self):
        assert chi2_even_cdf(1, 0.0) == 0.0

    def test_median_of_two_dof(self):
        # With 2 degrees of freedom the CDF is 1 - exp(-x/2), so the median
        # is exactly 2*ln(2).
        assert abs(chi2_even_cdf(1, 2.0 * math.log(2.0)) - 0.5) < 1e-14

    def test_value_at_99th_percentile_of_8_dof(self):
        # scipy oracle: stats.chi2.ppf(0.99, 8) = 20.090235029663233
        assert abs(chi2_even_cdf(4, 20.0902) - 0.99) < 1e-4

    def test_matches_scipy_cdf(self):
        for m in (1, 2, 4, 8, 16):
            for x in np.linspace(0.0, 60.0, 121):
                want = stats.chi2.cdf(x, 2 * m)
                got = chi2_even_cdf(m, float(x))
                assert abs(got - want) <= 1e-12

    def test_matches_direct_density_integration(self):
        # Independent oracle: numerically integrate the chi-square density.
        for m in (1, 2, 4, 8, 16):
            for x in (0.5, 2.0, 10.0, 25.0, 60.0):
                want, err = integrate.quad(
                    lambda t: stats.chi2.pdf(t, 2 * m), 0.0, x, limit=200
                )
                assert err < 1e-9
                assert abs(chi2_even_cdf(m, x) - want) <= 1e-9

    def test_monotone_nondecreasing(self):
        for m in (1, 2, 4, 8):
            grid = np.linspace(0.0, 80.0, 1000)
            values = [chi2_even_cdf(m, float(x)) for x in grid]
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_limits(self):
        assert chi2_even_cdf(4, float("inf")) == 1.0
        assert chi2_even_cdf(4, 1e6) == 1.0

    def test_negative_x_rejected(self):
        with pytest.raises(ValueError):
            chi2_even_cdf(2, -0.1)

    def test_bad_dof_rejected(self):
        with pytest.raises(ValueError):
            chi2_even_cdf(0, 1.0)


class TestChi2EvenQuantile:
    """Inverse chi-square CDF via bracketing and bisection."""

    def test_left_endpoint(self):
        assert chi2_even_quantile(3, 0.0) == 0.0

    def test_99th_percentile_of_8_dof(self):
        # scipy oracle: stats.chi2.ppf(0.99, 8) = 20.090235029663233
        assert abs(chi2_even_quantile(4, 0.99) - 20.090235029663233) < 1e-8

    def test_999th_permille_of_8_dof(self):
        # scipy oracle: stats.chi2.ppf(0.999, 8) = 26.12448155837614
        assert abs(chi2_even_quantile(4, 0.999) - 26.12448155837614) < 1e-8

    def test_round_trip_tolerance(self):
        for m in (1, 2, 4, 8, 16):
            for p in (0.001, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999, 0.9999):
                x = chi2_even_quantile(m, p)
                assert abs(chi2_even_cdf(m, x) - p) <= 1e-12

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            chi2_even_quantile(2, 1.0)
        with pytest.raises(ValueError):
            chi2_even_quantile(2, -0.01)

    @given(
        st.integers(min_value=1, max_value=16),
        st.floats(min_value=1e-6, max_value=1.0 - 1e-6),
    )
    @settings(max_examples=80, deadline=None)
    def test_round_trip_property(self, m, p):
        x = chi2_even_quantile(m, p)
        assert abs(chi2_even_cdf(m, x) - p) <= 1e-10

    def test_pdf_matches_scipy(self):
        for m in (1, 2, 4, 8):
            for x in (0.3, 1.0, 5.0, 20.0):
                assert abs(chi2_even_pdf(m, x) - stats.chi2.pdf(x, 2 * m)) < 1e-12
