"""Spoofing detection by comparing the two training-phase channel estimates.

The pilot phase is public, so an attacker can bias its estimate toward her
own channel; the random phase is private, so its estimate stays clean.  The
squared distance between the two estimates is therefore chi-square with
``2M`` degrees of freedom under either hypothesis, up to a known scale:
``C0`` (noise only) without spoofing, ``C1 = C0 + spoof_energy / 2`` with
it.  That yields an analytic threshold for any false-alarm target and
closed-form detection probabilities.

Two estimation pipelines feed the statistic:

* ``analytic_ideal`` — the random-phase estimate uses the true random bits,
  matching the distributional model exactly; used to validate the theory.
* ``realistic`` — the random-phase estimate comes from blind iterative LS
  seeded with the pilot-phase estimate, with the global sign resolved
  toward the pilot-phase estimate; used for end-to-end experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .estimation import ils_estimate, ls_estimate
from .numerics import chi2_even_cdf, chi2_even_quantile
from .training import TrainingObservation

__all__ = [
    "DetectorConfig",
    "DetectionOutcome",
    "PIPELINES",
    "test_statistic",
    "calibrate_threshold",
    "decide",
    "theoretical_pfa",
    "theoretical_pd",
    "estimate_pair",
    "run_detection",
    "correlation_diagnostics",
]

PIPELINES = ("analytic_ideal", "realistic")


@dataclass(frozen=True)
class DetectorConfig:
    """Everything the detector needs to calibrate its threshold."""

    m_antennas: int
    n_pilot: int
    n_random: int
    sigma2_a: float
    target_pfa: float

    def __post_init__(self) -> None:
        if int(self.m_antennas) != self.m_antennas or self.m_antennas < 1:
            raise ValueError(f"m_antennas must be an integer >= 1, got {self.m_antennas}")
        object.__setattr__(self, "m_antennas", int(self.m_antennas))
        for name in ("n_pilot", "n_random"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value}")
            object.__setattr__(self, name, int(value))
        if not (self.sigma2_a > 0.0 and math.isfinite(self.sigma2_a)):
            raise ValueError(f"sigma2_a must be finite and > 0, got {self.sigma2_a}")
        if not (0.0 < self.target_pfa < 1.0):
            raise ValueError(f"target_pfa must lie in (0, 1), got {self.target_pfa}")

    @property
    def null_scale(self) -> float:
        """Chi-square scale of the statistic without spoofing:
        ``C0 = (sigma2_a / n_pilot + sigma2_a / n_random) / 2``."""
        return 0.5 * (self.sigma2_a / self.n_pilot + self.sigma2_a / self.n_random)

    def alt_scale(self, spoof_energy: float) -> float:
        """Chi-square scale under spoofing with received energy
        ``spoof_energy = p_e * alpha_e``: ``C1 = C0 + spoof_energy / 2``."""
        if spoof_energy < 0.0:
            raise ValueError(f"spoof_energy must be >= 0, got {spoof_energy}")
        return self.null_scale + 0.5 * spoof_energy


@dataclass(frozen=True)
class DetectionOutcome:
    """Result of one detection: the statistic, the threshold it was compared
    against, the verdict, and the energy-included estimate of the attacker's
    channel (the difference of the two phase estimates, meaningful only when
    ``spoofed`` is True)."""

    statistic: float
    threshold: float
    spoofed: bool
    h_e_estimate: np.ndarray


def test_statistic(h_bp: np.ndarray, h_br: np.ndarray) -> Union[float, np.ndarray]:
    """Squared Euclidean distance between the two phase estimates."""
    h_bp = np.asarray(h_bp, dtype=complex)
    h_br = np.asarray(h_br, dtype=complex)
    if h_bp.shape != h_br.shape:
        raise ValueError(f"shape mismatch: {h_bp.shape} vs {h_br.shape}")
    out = np.sum(np.abs(h_bp - h_br) ** 2, axis=-1)
    if out.ndim == 0:
        return float(out)
    return out


def calibrate_threshold(cfg: DetectorConfig) -> float:
    """Threshold whose false-alarm probability equals ``cfg.target_pfa``.

    ``gamma = C0 * Q(1 - target_pfa)`` where ``Q`` is the chi-square
    quantile with ``2 * m_antennas`` degrees of freedom; plugging the result
    into ``theoretical_pfa`` round-trips to the target.
    """
    return cfg.null_scale * chi2_even_quantile(cfg.m_antennas, 1.0 - cfg.target_pfa)


def decide(h_bp: np.ndarray, h_br: np.ndarray, threshold: float) -> DetectionOutcome:
    """Compare the statistic against a threshold; ties resolve to no-spoof.

    The attacker-channel estimate (difference of the phase estimates) is
    attached regardless of the verdict; callers gate on ``spoofed``.
    """
    if threshold < 0.0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    statistic = test_statistic(h_bp, h_br)
    if not np.isscalar(statistic):
        raise ValueError("decide expects single-trial estimates (no batch axes)")
    return DetectionOutcome(
        statistic=float(statistic),
        threshold=float(threshold),
        spoofed=bool(statistic > threshold),
        h_e_estimate=np.asarray(h_bp) - np.asarray(h_br),
    )


def theoretical_pfa(cfg: DetectorConfig, gamma: float) -> float:
    """Closed-form false-alarm probability ``1 - F(gamma / C0)``."""
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return 1.0 - chi2_even_cdf(cfg.m_antennas, gamma / cfg.null_scale)


def theoretical_pd(cfg: DetectorConfig, gamma: float, spoof_energy: float) -> float:
    """Closed-form detection probability ``1 - F(gamma / C1)`` for a given
    received spoofing energy ``p_e * alpha_e``."""
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return 1.0 - chi2_even_cdf(cfg.m_antennas, gamma / cfg.alt_scale(spoof_energy))


def estimate_pair(
    obs: TrainingObservation,
    pipeline: str = "realistic",
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, Union[int, np.ndarray]]:
    """Produce the pilot-phase and random-phase channel estimates.

    Returns ``(h_bp, h_br, b_r_hat, iterations)``.  The pilot-phase estimate
    is always the LS solution with the known pilots.  The random-phase
    estimate depends on the pipeline: ``analytic_ideal`` uses the true
    random bits (iterations = 0), ``realistic`` runs blind iterative LS
    seeded with ``h_bp`` and resolves the sign ambiguity toward ``h_bp``.
    """
    if pipeline not in PIPELINES:
        raise ValueError(f"pipeline must be one of {PIPELINES}, got {pipeline!r}")
    h_bp = ls_estimate(obs.y_p, obs.b_p)
    if pipeline == "analytic_ideal":
        h_br = ls_estimate(obs.y_r, obs.b_r)
        b_r_hat = np.broadcast_to(obs.b_r, obs.y_r.shape[:-2] + obs.b_r.shape[-1:])
        iterations: Union[int, np.ndarray] = 0
    else:
        h_br, b_r_hat, iterations = ils_estimate(obs.y_r, h_bp)
        # Resolve the blind sign ambiguity toward the pilot-phase estimate,
        # flipping the decided bits consistently with the channel estimate.
        corr = np.sum(np.conj(h_bp) * h_br, axis=-1).real
        sign = np.where(corr >= 0.0, 1.0, -1.0)
        h_br = h_br * sign[..., None]
        b_r_hat = b_r_hat * sign[..., None]
    return h_bp, h_br, b_r_hat, iterations


def run_detection(
    obs: TrainingObservation,
    cfg: DetectorConfig,
    pipeline: str = "realistic",
) -> DetectionOutcome:
    """End-to-end single-trial detection: estimate both phases, calibrate the
    threshold from ``cfg``, and decide."""
    h_bp, h_br, _, _ = estimate_pair(obs, pipeline=pipeline)
    return decide(h_bp, h_br, calibrate_threshold(cfg))


def correlation_diagnostics(
    b_r: np.ndarray,
    b_er: np.ndarray,
    b_r_hat: np.ndarray,
) -> Tuple[float, float]:
    """Normalized correlations of the detected random bits with each party.

    Returns ``(mu, nu)`` where ``mu = (1/N_r) b_r . b_r_hat`` measures
    agreement with the legitimate random bits and ``nu = (1/N_r) b_er .
    b_r_hat`` agreement with the attacker's bits; both lie in [-1, 1], and
    for independent ±1 sequences they cannot both sit near ±1.
    """
    b_r = np.asarray(b_r, dtype=np.float64)
    b_er = np.asarray(b_er, dtype=np.float64)
    b_r_hat = np.asarray(b_r_hat, dtype=np.float64)
    if not (b_r.shape == b_er.shape == b_r_hat.shape) or b_r.ndim != 1:
        raise ValueError(
            f"expected three equal-length vectors, got {b_r.shape}, "
            f"{b_er.shape}, {b_r_hat.shape}"
        )
    n = b_r.shape[0]
    mu = float(np.dot(b_r, b_r_hat) / n)
    nu = float(np.dot(b_er, b_r_hat) / n)
    return mu, nu
