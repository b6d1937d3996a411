"""Closed-form average receive SNRs under MRT with an LS channel estimate.

These formulas describe the single-training-phase link: the transmitter
estimates the legitimate channel from ``n_train`` public pilots (possibly
spoofed), beams along the estimate, and the average SNRs at the legitimate
receiver and at the attacker follow in closed form.  The derivation casts
the mean beamforming gain ``E[|h^H w|^2]`` as a ratio: the denominator is
the exact second moment ``E[norm(h_hat)^2]`` of the estimate, the numerator
is the matching closed-form alignment term.  Both factors are exposed so
the ratio structure is testable against Monte Carlo on its own, not just
through the final value (the denominator as a bare moment, the numerator
through the normalized gain).

The attacker-side formula is the legitimate-side formula with the roles of
the two links swapped (gains, noise figures, and transmit powers), and is
implemented exactly that way.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .channel import ChannelModel
from .training import Scenario

__all__ = [
    "TheoryPoint",
    "alignment_numerator",
    "alignment_denominator",
    "avg_snr_bob_no_spoof",
    "avg_snr_bob_spoofed",
    "avg_snr_eve_spoofed",
]


@dataclass(frozen=True)
class TheoryPoint:
    """A scenario plus the pilot count ``n_train`` of the single-phase model."""

    scenario: Scenario
    n_train: int

    def __post_init__(self) -> None:
        if int(self.n_train) != self.n_train or self.n_train < 1:
            raise ValueError(f"n_train must be an integer >= 1, got {self.n_train}")
        object.__setattr__(self, "n_train", int(self.n_train))


def _moments(
    m: int,
    n: int,
    p_tx: float,
    alpha_tx: float,
    p_other: float,
    alpha_other: float,
    sigma2_a: float,
) -> tuple[float, float]:
    """Numerator/denominator pair of the mean-beamforming-gain ratio.

    With the estimate ``h_hat = sqrt(p_tx) h_tx + sqrt(p_other) h_other +
    noise/n`` and the unit beam ``w = h_hat / norm(h_hat)``, the average
    gain ``E[|h_tx^H w|^2]`` is approximated by numerator/denominator with

    * numerator   = M^2 p_tx alpha_tx^2 + M p_other alpha_tx alpha_other
                    + M alpha_tx sigma2_a / n
    * denominator = M p_tx alpha_tx + M p_other alpha_other + M sigma2_a / n

    The denominator is the exact second moment ``E[norm(h_hat)^2]``; the
    numerator is the closed-form alignment term paired with it (it is not
    the bare moment ``E[|h_tx^H h_hat|^2]``, whose leading coefficient
    would be M(M+1) rather than M^2 — the difference accounts for the
    correlation between the alignment and the normalization).
    """
    numerator = (
        m * m * p_tx * alpha_tx * alpha_tx
        + m * p_other * alpha_tx * alpha_other
        + m * alpha_tx * sigma2_a / n
    )
    denominator = (
        m * p_tx * alpha_tx + m * p_other * alpha_other + m * sigma2_a / n
    )
    return numerator, denominator


def alignment_numerator(pt: TheoryPoint) -> float:
    """Closed-form numerator of the mean-gain ratio for the (possibly
    spoofed) pilot LS estimate; dividing by ``alignment_denominator``
    approximates ``E[|h_b^H w|^2]`` for the unit beam along the estimate."""
    s = pt.scenario
    num, _ = _moments(
        s.model.m_antennas,
        pt.n_train,
        s.p_b,
        s.model.alpha_b,
        s.p_e,
        s.model.alpha_e,
        s.sigma2_a,
    )
    return num


def alignment_denominator(pt: TheoryPoint) -> float:
    """Exact second moment ``E[norm(h_hat)^2]`` of the (possibly spoofed)
    pilot LS estimate."""
    s = pt.scenario
    _, den = _moments(
        s.model.m_antennas,
        pt.n_train,
        s.p_b,
        s.model.alpha_b,
        s.p_e,
        s.model.alpha_e,
        s.sigma2_a,
    )
    return den


def avg_snr_bob_spoofed(pt: TheoryPoint) -> float:
    """Average legitimate-receiver SNR under MRT on the spoofed estimate.

    ``(p_a / sigma2_b) * E[|h_b^H h_hat|^2] / E[norm(h_hat)^2]``; with
    ``p_e = 0`` this reduces exactly to the no-attack expression.
    """
    s = pt.scenario
    return (s.p_a / s.sigma2_b) * alignment_numerator(pt) / alignment_denominator(pt)


def avg_snr_bob_no_spoof(pt: TheoryPoint) -> float:
    """Average legitimate-receiver SNR without an attack (``p_e`` forced 0)."""
    clean = replace(pt.scenario, p_e=0.0)
    return avg_snr_bob_spoofed(TheoryPoint(scenario=clean, n_train=pt.n_train))


def avg_snr_eve_spoofed(pt: TheoryPoint) -> float:
    """Average attacker SNR under MRT on the spoofed estimate.

    Obtained from the legitimate-side formula by swapping the two links:
    gains ``alpha_b <-> alpha_e``, noise ``sigma2_b -> sigma2_e``, and
    training powers ``p_b <-> p_e``.
    """
    s = pt.scenario
    swapped = Scenario(
        model=ChannelModel(
            m_antennas=s.model.m_antennas,
            alpha_b=s.model.alpha_e,
            alpha_e=s.model.alpha_b,
        ),
        n_pilot=s.n_pilot,
        n_random=s.n_random,
        p_b=s.p_e,
        p_e=s.p_b,
        p_er=s.p_er,
        random_phase_attack=s.random_phase_attack,
        sigma2_a=s.sigma2_a,
        sigma2_b=s.sigma2_e,
        sigma2_e=s.sigma2_b,
        p_a=s.p_a,
    )
    return avg_snr_bob_spoofed(TheoryPoint(scenario=swapped, n_train=pt.n_train))
