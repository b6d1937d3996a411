"""Tests for beamformer designs and secrecy-rate bookkeeping."""

import math

import numpy as np
import pytest

from pilotguard.beamforming import (
    DegenerateGeometryError,
    ged_beamformer,
    instantaneous_snr,
    mrt_beamformer,
    secrecy_rate,
    zf_beamformer,
)
from pilotguard.numerics import make_stream, sample_cscg


def _rayleigh_quotient(w, h_b, h_e, phi, psi):
    num = 1.0 + phi * abs(np.vdot(h_b, w)) ** 2
    den = 1.0 + psi * abs(np.vdot(h_e, w)) ** 2
    return num / den


def _grid_search_quotient(h_b, h_e, phi, psi, steps=500):
    """Brute-force maximization of the secrecy Rayleigh quotient over the
    2-D complex unit sphere (magnitude/relative-phase parameterization, with
    the irrelevant global phase fixed).  Serves as an independent oracle for
    the generalized-eigenvector route in small dimensions."""
    theta = np.linspace(0.0, math.pi / 2.0, steps)
    rho = np.linspace(0.0, 2.0 * math.pi, steps, endpoint=False)
    tt, rr = np.meshgrid(theta, rho, indexing="ij")
    w = np.stack(
        [np.cos(tt) + 0j, np.sin(tt) * np.exp(1j * rr)], axis=-1
    ).reshape(-1, 2)
    num = 1.0 + phi * np.abs(w @ np.conj(h_b)) ** 2
    den = 1.0 + psi * np.abs(w @ np.conj(h_e)) ** 2
    return float(np.max(num / den))


def _power_iteration_oracle(h_b, h_e, phi, psi, iters=2000):
    """Second independent route: explicitly invert the denominator matrix via
    its rank-one structure and power-iterate the resulting operator."""
    m = h_b.shape[0]
    eye = np.eye(m, dtype=complex)
    gain = eye + phi * np.outer(h_b, np.conj(h_b))
    denom_inv = eye - (psi / (1.0 + psi * np.vdot(h_e, h_e).real)) * np.outer(
        h_e, np.conj(h_e)
    )
    op = denom_inv @ gain
    w = h_b / np.linalg.norm(h_b)
    for _ in range(iters):
        w = op @ w
        w = w / np.linalg.norm(w)
    return w


class TestMrt:
    def test_unit_norm_along_channel(self):
        h = np.array([3.0 + 4j, 0.0])
        w = mrt_beamformer(h)
        assert abs(np.linalg.norm(w) - 1.0) < 1e-14
        np.testing.assert_allclose(w, h / 5.0, atol=1e-14)

    def test_zero_channel_rejected(self):
        with pytest.raises(ValueError):
            mrt_beamformer(np.zeros(4, dtype=complex))


class TestZf:
    def test_orthogonal_channels_reduce_to_mrt(self):
        h_b = np.array([1.0 + 0j, 0.0])
        h_e = np.array([0.0, 1.0 + 0j])
        np.testing.assert_allclose(zf_beamformer(h_b, h_e), h_b, atol=1e-14)

    def test_two_dim_projection(self):
        h_b = np.array([1.0 + 0j, 1.0]) / math.sqrt(2.0)
        h_e = np.array([1.0 + 0j, 0.0])
        w = zf_beamformer(h_b, h_e)
        np.testing.assert_allclose(w, np.array([0.0, 1.0 + 0j]), atol=1e-14)

    def test_nulls_attacker_direction(self):
        stream = make_stream(10)
        for _ in range(100):
            h_b = sample_cscg(stream, 4, 1.0)
            h_e = sample_cscg(stream, 4, 1.0)
            w = zf_beamformer(h_b, h_e)
            assert abs(np.linalg.norm(w) - 1.0) < 1e-12
            assert abs(np.vdot(h_e, w)) <= 1e-10

    def test_invariant_to_attacker_scaling(self):
        stream = make_stream(11)
        h_b = sample_cscg(stream, 4, 1.0)
        h_e = sample_cscg(stream, 4, 1.0)
        w1 = zf_beamformer(h_b, h_e)
        w2 = zf_beamformer(h_b, h_e * (2.0 - 3.0j))
        np.testing.assert_allclose(w1, w2, atol=1e-12)

    def test_near_zero_attacker_falls_back_to_mrt(self):
        h_b = np.array([1.0 + 0j, 2.0, 0.0, 0.0])
        h_e = np.full(4, 1e-14 + 0j)
        np.testing.assert_allclose(
            zf_beamformer(h_b, h_e), mrt_beamformer(h_b), atol=1e-12
        )

    def test_parallel_channels_raise(self):
        h_b = np.array([1.0 + 1j, 2.0, -0.5j, 1.0])
        with pytest.raises(DegenerateGeometryError):
            zf_beamformer(h_b, 0.5j * h_b)

    def test_degenerate_error_is_value_error(self):
        assert issubclass(DegenerateGeometryError, ValueError)


class TestGed:
    def test_idle_attacker_reduces_to_mrt(self):
        stream = make_stream(12)
        h_b = sample_cscg(stream, 4, 1.0)
        w = ged_beamformer(h_b, np.zeros(4, dtype=complex), 10.0, 10.0)
        np.testing.assert_allclose(w, mrt_beamformer(h_b), atol=1e-10)

    def test_zero_psi_reduces_to_mrt(self):
        stream = make_stream(13)
        h_b = sample_cscg(stream, 4, 1.0)
        h_e = sample_cscg(stream, 4, 1.0)
        w = ged_beamformer(h_b, h_e, 10.0, 0.0)
        np.testing.assert_allclose(w, mrt_beamformer(h_b), atol=1e-10)

    def test_orthogonal_channels(self):
        h_b = np.array([1.0 + 0j, 0.0])
        h_e = np.array([0.0, 1.0 + 0j])
        w = ged_beamformer(h_b, h_e, 10.0, 10.0)
        np.testing.assert_allclose(w, h_b, atol=1e-10)

    def test_phase_canonicalization(self):
        stream = make_stream(14)
        h_b = sample_cscg(stream, 4, 1.0)
        h_e = sample_cscg(stream, 4, 1.0)
        w = ged_beamformer(h_b, h_e, 5.0, 2.0)
        inner = np.vdot(h_b, w)
        assert abs(inner.imag) < 1e-12
        assert inner.real >= 0.0

    def test_matches_grid_search_in_two_dims(self):
        stream = make_stream(15)
        for _ in range(5):
            h_b = sample_cscg(stream, 2, 1.0)
            h_e = sample_cscg(stream, 2, 1.0)
            w = ged_beamformer(h_b, h_e, 10.0, 10.0)
            got = _rayleigh_quotient(w, h_b, h_e, 10.0, 10.0)
            best = _grid_search_quotient(h_b, h_e, 10.0, 10.0)
            # The eigensolution can only beat the finite grid.
            assert got >= best - 1e-6
            assert got <= best * 1.01

    def test_matches_power_iteration_oracle(self):
        stream = make_stream(16)
        for _ in range(20):
            h_b = sample_cscg(stream, 4, 1.0)
            h_e = sample_cscg(stream, 4, 1.0)
            w_eig = ged_beamformer(h_b, h_e, 7.0, 3.0)
            w_pow = _power_iteration_oracle(h_b, h_e, 7.0, 3.0)
            # Same direction up to a global phase.
            assert abs(abs(np.vdot(w_eig, w_pow)) - 1.0) < 1e-8

    def test_dominates_other_beams(self):
        stream = make_stream(17)
        for _ in range(50):
            h_b = sample_cscg(stream, 4, 1.0)
            h_e = sample_cscg(stream, 4, 1.0)
            w_ged = ged_beamformer(h_b, h_e, 10.0, 10.0)
            q_ged = _rayleigh_quotient(w_ged, h_b, h_e, 10.0, 10.0)
            for rival in (mrt_beamformer(h_b), zf_beamformer(h_b, h_e)):
                assert q_ged >= _rayleigh_quotient(rival, h_b, h_e, 10.0, 10.0) - 1e-9

    def test_validation(self):
        h = np.ones(4, dtype=complex)
        with pytest.raises(ValueError):
            ged_beamformer(np.zeros(4, dtype=complex), h, 1.0, 1.0)
        with pytest.raises(ValueError):
            ged_beamformer(h, h, -1.0, 1.0)
        with pytest.raises(ValueError):
            ged_beamformer(h, np.ones(3, dtype=complex), 1.0, 1.0)


class TestSnrAndRates:
    def test_snr_example(self):
        h = np.array([2.0 + 0j, 0.0])
        w = np.array([1.0 + 0j, 0.0])
        assert instantaneous_snr(h, w, 4.0, 2.0) == 8.0

    def test_snr_validation(self):
        h = np.ones(2, dtype=complex)
        with pytest.raises(ValueError):
            instantaneous_snr(h, h, -1.0, 1.0)
        with pytest.raises(ValueError):
            instantaneous_snr(h, h, 1.0, 0.0)

    def test_secrecy_rate_examples(self):
        assert secrecy_rate(3.0, 1.0) == 1.0
        assert secrecy_rate(1.0, 3.0) == 0.0
        assert secrecy_rate(0.0, 0.0) == 0.0

    def test_secrecy_rate_validation(self):
        with pytest.raises(ValueError):
            secrecy_rate(-0.1, 1.0)

    def test_zf_gives_perfect_secrecy_with_true_channels(self):
        stream = make_stream(18)
        for _ in range(50):
            h_b = sample_cscg(stream, 4, 1.0)
            h_e = sample_cscg(stream, 4, 1.0)
            w = zf_beamformer(h_b, h_e)
            snr_e = instantaneous_snr(h_e, w, 10.0, 1.0)
            assert snr_e <= 1e-18
            rate = secrecy_rate(instantaneous_snr(h_b, w, 10.0, 1.0), snr_e)
            assert rate > 0.0

    def test_per_trial_secrecy_ordering(self):
        # With true channels the optimal beam can never do worse than
        # nulling, which can never do worse than zero.
        stream = make_stream(19)
        p_tx = 10.0
        for _ in range(200):
            h_b = sample_cscg(stream, 4, 1.0)
            h_e = sample_cscg(stream, 4, 1.0)
            w_zf = zf_beamformer(h_b, h_e)
            w_ged = ged_beamformer(h_b, h_e, p_tx, p_tx)
            r_zf = secrecy_rate(
                instantaneous_snr(h_b, w_zf, p_tx, 1.0),
                instantaneous_snr(h_e, w_zf, p_tx, 1.0),
            )
            r_ged = secrecy_rate(
                instantaneous_snr(h_b, w_ged, p_tx, 1.0),
                instantaneous_snr(h_e, w_ged, p_tx, 1.0),
            )
            assert r_ged >= r_zf - 1e-9
            assert r_zf >= 0.0

    def test_zf_approaches_ged_at_high_power(self):
        # As transmit power grows the attacker's leakage term dominates the
        # quotient, so the optimal beam converges to the nulling beam.
        stream = make_stream(20)
        trials = 10**4
        total_zf = 0.0
        total_ged = 0.0
        for _ in range(trials):
            h_b = sample_cscg(stream, 4, 1.0)
            h_e = sample_cscg(stream, 4, 1.0)
            p_tx = 10**4
            w_zf = zf_beamformer(h_b, h_e)
            w_ged = ged_beamformer(h_b, h_e, p_tx, p_tx)
            total_zf += secrecy_rate(
                instantaneous_snr(h_b, w_zf, p_tx, 1.0),
                instantaneous_snr(h_e, w_zf, p_tx, 1.0),
            )
            total_ged += secrecy_rate(
                instantaneous_snr(h_b, w_ged, p_tx, 1.0),
                instantaneous_snr(h_e, w_ged, p_tx, 1.0),
            )
        assert total_zf >= 0.98 * total_ged
