"""Tests for the closed-form average-SNR expressions."""

import numpy as np
import pytest

from pilotguard.channel import ChannelModel, sample_channels
from pilotguard.estimation import ls_estimate
from pilotguard.numerics import make_stream
from pilotguard.theory import (
    TheoryPoint,
    alignment_denominator,
    alignment_numerator,
    avg_snr_bob_no_spoof,
    avg_snr_bob_spoofed,
    avg_snr_eve_spoofed,
)
from pilotguard.training import Scenario, synthesize_pilot_phase


def _point(m=4, n=100, p_b=10.0, p_e=0.0, alpha_b=1.0, alpha_e=1.0,
           sigma2_a=1.0, sigma2_b=1.0, sigma2_e=1.0, p_a=1.0):
    model = ChannelModel(m_antennas=m, alpha_b=alpha_b, alpha_e=alpha_e)
    scenario = Scenario(
        model=model, n_pilot=n, n_random=1, p_b=p_b, p_e=p_e,
        sigma2_a=sigma2_a, sigma2_b=sigma2_b, sigma2_e=sigma2_e, p_a=p_a,
    )
    return TheoryPoint(scenario=scenario, n_train=n)


class TestValidation:
    def test_bad_train_count_rejected(self):
        sc = _point().scenario
        with pytest.raises(ValueError):
            TheoryPoint(scenario=sc, n_train=0)


class TestNoSpoofFormula:
    def test_reference_value(self):
        # m=4, n=100, p_b=10: (16*10 + 4/100) / (4*10 + 4/100)
        # = 160.04 / 40.04 = 3.997002997...
        pt = _point(m=4, n=100, p_b=10.0)
        assert abs(avg_snr_bob_no_spoof(pt) - 160.04 / 40.04) < 1e-12
        assert abs(avg_snr_bob_no_spoof(pt) - 3.997002997002997) < 1e-12

    def test_high_training_power_limit(self):
        # Perfect estimation: the average SNR approaches M * p_a * alpha_b
        # / sigma2_b (full beamforming gain).
        pt = _point(m=8, p_b=1e12, p_a=2.0, sigma2_b=0.5)
        want = 8 * 2.0 / 0.5
        assert abs(avg_snr_bob_no_spoof(pt) / want - 1.0) < 1e-6

    def test_long_training_limit(self):
        pt = _point(m=4, n=10**12, p_b=1.0)
        assert abs(avg_snr_bob_no_spoof(pt) / 4.0 - 1.0) < 1e-6

    def test_spoofed_reduces_when_attack_off(self):
        pt = _point(m=4, n=64, p_b=5.0)
        assert avg_snr_bob_spoofed(pt) == avg_snr_bob_no_spoof(pt)


class TestSpoofedFormulas:
    def test_reference_value_bob(self):
        # m=4, n=100, p_b=10, p_e=1:
        # (16*10 + 4 + 0.04) / (4*10 + 4 + 0.04) = 164.04 / 44.04
        pt = _point(m=4, n=100, p_b=10.0, p_e=1.0)
        assert abs(avg_snr_bob_spoofed(pt) - 164.04 / 44.04) < 1e-12

    def test_reference_value_eve(self):
        # Swapped roles: (16 * 1 + 4 * 10 + 0.04) / (4 + 40 + 0.04)
        pt = _point(m=4, n=100, p_b=10.0, p_e=1.0)
        assert abs(avg_snr_eve_spoofed(pt) - 56.04 / 44.04) < 1e-12

    def test_strong_spoofing_limits(self):
        # The attacker steering the estimate entirely to herself gets the
        # full array gain while the legitimate receiver loses it.
        pt = _point(m=8, n=100, p_b=1.0, p_e=1e12)
        assert abs(avg_snr_eve_spoofed(pt) / 8.0 - 1.0) < 1e-6
        assert abs(avg_snr_bob_spoofed(pt) / 1.0 - 1.0) < 1e-6

    def test_idle_attacker_limits(self):
        pt = _point(m=8, n=100, p_b=1e12, p_e=0.0)
        assert abs(avg_snr_eve_spoofed(pt) / 1.0 - 1.0) < 1e-6

    def test_swap_symmetry_exact(self):
        # Swapping every Bob/Eve parameter must map one formula onto the
        # other exactly, not just approximately.
        pt = _point(
            m=4, n=64, p_b=3.0, p_e=0.7, alpha_b=1.5, alpha_e=0.4,
            sigma2_b=2.0, sigma2_e=0.3, p_a=5.0,
        )
        mirrored = _point(
            m=4, n=64, p_b=0.7, p_e=3.0, alpha_b=0.4, alpha_e=1.5,
            sigma2_b=0.3, sigma2_e=2.0, p_a=5.0,
        )
        assert avg_snr_eve_spoofed(pt) == avg_snr_bob_spoofed(mirrored)

    def test_monotone_in_spoof_power(self):
        grid = np.logspace(-2, 2, 40)
        bob = [avg_snr_bob_spoofed(_point(p_e=float(p))) for p in grid]
        eve = [avg_snr_eve_spoofed(_point(p_e=float(p))) for p in grid]
        assert all(b < a for a, b in zip(bob, bob[1:]))
        assert all(b > a for a, b in zip(eve, eve[1:]))

    def test_ratio_structure(self):
        pt = _point(m=4, n=64, p_b=5.0, p_e=2.0, p_a=3.0, sigma2_b=0.5)
        want = (3.0 / 0.5) * alignment_numerator(pt) / alignment_denominator(pt)
        assert avg_snr_bob_spoofed(pt) == want


class TestMomentsAgainstMonteCarlo:
    def test_denominator_is_estimate_energy(self):
        # The denominator is the exact second moment of the pilot LS
        # estimate, directly measurable on its own.
        pt = _point(m=4, n=25, p_b=2.0, p_e=0.5)
        sc = pt.scenario
        stream = make_stream(321)
        reals = sample_channels(sc.model, stream, size=2 * 10**4)
        y_p, b_p = synthesize_pilot_phase(sc, reals, stream)
        est = ls_estimate(y_p, b_p)
        den_mc = float(np.mean(np.sum(np.abs(est) ** 2, axis=-1)))
        assert abs(den_mc - alignment_denominator(pt)) <= 0.02 * alignment_denominator(pt)

    def test_numerator_through_normalized_gain(self):
        # The numerator is defined relative to that denominator: their
        # ratio approximates the mean gain E[|h_b^H w|^2] of the unit beam
        # along the estimate, which Monte Carlo can measure directly.
        pt = _point(m=4, n=25, p_b=2.0, p_e=0.5)
        sc = pt.scenario
        stream = make_stream(322)
        reals = sample_channels(sc.model, stream, size=2 * 10**4)
        y_p, b_p = synthesize_pilot_phase(sc, reals, stream)
        est = ls_estimate(y_p, b_p)
        w = est / np.linalg.norm(est, axis=-1, keepdims=True)
        gain_mc = float(np.mean(np.abs(np.sum(np.conj(reals.h_b) * w, axis=-1)) ** 2))
        want = alignment_numerator(pt) / alignment_denominator(pt)
        assert abs(gain_mc - want) <= 0.02 * want
