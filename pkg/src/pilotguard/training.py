"""Training-phase signal synthesis.

A trial has up to two uplink training phases: a pilot phase whose ±1 bit
sequence is publicly known (and therefore spoofable by the eavesdropper),
and a random phase whose ±1 bits are drawn privately by the legitimate
receiver.  This module builds the received matrices at the transmitter for
both phases under a configurable attacker strategy.

All synthesis is batch-aware: if the channel realization carries leading
batch axes, the emitted observation matrices carry them too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .channel import ChannelModel, ChannelRealization
from .numerics import sample_cscg

__all__ = [
    "Scenario",
    "TrainingObservation",
    "RANDOM_PHASE_ATTACKS",
    "make_pilot_bits",
    "synthesize_pilot_phase",
    "synthesize",
]

RANDOM_PHASE_ATTACKS = ("none", "random_bits", "gaussian")


@dataclass(frozen=True)
class Scenario:
    """Full parameterization of one experiment point.

    Powers and gains are linear (not dB).  ``p_e`` is the eavesdropper's
    pilot-phase spoofing power; ``p_e == 0`` means no spoofing attack.
    ``p_er`` and ``random_phase_attack`` control an optional attack on the
    random phase: ``random_bits`` sends an independent private ±1 sequence,
    ``gaussian`` sends circularly symmetric complex Gaussian symbols, both
    with per-symbol power ``p_er``.
    """

    model: ChannelModel
    n_pilot: int
    n_random: int
    p_b: float
    p_e: float = 0.0
    p_er: float = 0.0
    random_phase_attack: str = "none"
    sigma2_a: float = 1.0
    sigma2_b: float = 1.0
    sigma2_e: float = 1.0
    p_a: float = 1.0

    def __post_init__(self) -> None:
        for name in ("n_pilot", "n_random"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value}")
            object.__setattr__(self, name, int(value))
        for name in ("p_b", "p_e", "p_er", "p_a"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
            object.__setattr__(self, name, value)
        for name in ("sigma2_a", "sigma2_b", "sigma2_e"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be finite and > 0, got {value}")
            object.__setattr__(self, name, value)
        if self.random_phase_attack not in RANDOM_PHASE_ATTACKS:
            raise ValueError(
                f"random_phase_attack must be one of {RANDOM_PHASE_ATTACKS}, "
                f"got {self.random_phase_attack!r}"
            )

    @property
    def spoofed(self) -> bool:
        """True when the pilot phase carries a spoofing component."""
        return self.p_e > 0.0

    @property
    def spoof_energy(self) -> float:
        """Received spoofing energy scale ``p_e * alpha_e``."""
        return self.p_e * self.model.alpha_e


@dataclass(frozen=True)
class TrainingObservation:
    """Received training matrices plus the ground truth used to build them.

    ``y_p`` is M x N_p (pilot phase), ``y_r`` is M x N_r (random phase); with
    batched synthesis both carry leading batch axes.  ``b_er`` holds the
    attacker's private ±1 bits when the random-phase attack is ``random_bits``;
    ``eve_symbols`` holds the attacker's complex symbols when it is
    ``gaussian``; both are None otherwise.
    """

    y_p: np.ndarray
    y_r: np.ndarray
    b_p: np.ndarray
    b_r: np.ndarray
    truth: ChannelRealization
    b_er: Optional[np.ndarray] = None
    eve_symbols: Optional[np.ndarray] = None


def _bits(stream: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """Draw i.i.d. uniform ±1 bits as float64."""
    return stream.integers(0, 2, size=shape).astype(np.float64) * 2.0 - 1.0


def make_pilot_bits(n: int, stream: np.random.Generator) -> np.ndarray:
    """Generate the publicly known ±1 pilot sequence of length ``n``.

    The sequence is a deterministic function of the stream state, so every
    party deriving the same stream reproduces the same pilots.  Estimation
    quality depends only on the sequence energy, which is fixed at ``n``,
    so any ±1 content is equivalent.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    return _bits(stream, (int(n),))


def _rank1(h: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Outer product ``h b^T`` with broadcasting over leading batch axes."""
    return h[..., :, None] * bits[..., None, :]


def synthesize_pilot_phase(
    scenario: Scenario,
    realization: ChannelRealization,
    stream: np.random.Generator,
    pilot_bits: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Build the pilot-phase observation ``Y_p`` only.

    ``Y_p = sqrt(p_b) h_b b_p^T + sqrt(p_e) h_e b_p^T + U_p`` where ``U_p``
    has i.i.d. circularly symmetric complex Gaussian entries of variance
    ``sigma2_a``.  Returns ``(y_p, b_p)``.  When ``pilot_bits`` is omitted
    the sequence is drawn from the stream first.
    """
    if realization.m_antennas != scenario.model.m_antennas:
        raise ValueError(
            f"realization has {realization.m_antennas} antennas, "
            f"scenario expects {scenario.model.m_antennas}"
        )
    if pilot_bits is None:
        b_p = make_pilot_bits(scenario.n_pilot, stream)
    else:
        b_p = np.asarray(pilot_bits, dtype=np.float64)
        if b_p.shape[-1] != scenario.n_pilot:
            raise ValueError(
                f"pilot_bits length {b_p.shape[-1]} != n_pilot {scenario.n_pilot}"
            )
    batch = realization.h_b.shape[:-1]
    shape = batch + (scenario.model.m_antennas, scenario.n_pilot)
    tx = math.sqrt(scenario.p_b) * realization.h_b
    if scenario.p_e > 0.0:
        tx = tx + math.sqrt(scenario.p_e) * realization.h_e
    y_p = _rank1(tx, b_p) + sample_cscg(stream, shape, scenario.sigma2_a)
    return y_p, b_p


def synthesize(
    scenario: Scenario,
    realization: ChannelRealization,
    stream: np.random.Generator,
    pilot_bits: Optional[np.ndarray] = None,
) -> TrainingObservation:
    """Build both training-phase observations for one trial (or batch).

    Stream consumption order is fixed: pilot bits (when not supplied),
    random-phase bits, pilot-phase noise, random-phase noise, then attacker
    symbols if the random phase is under attack.  The random bits are drawn
    per batch element and are unknown to the attacker path, whose own
    symbols are drawn independently.
    """
    if realization.m_antennas != scenario.model.m_antennas:
        raise ValueError(
            f"realization has {realization.m_antennas} antennas, "
            f"scenario expects {scenario.model.m_antennas}"
        )
    m = scenario.model.m_antennas
    batch = realization.h_b.shape[:-1]

    if pilot_bits is None:
        b_p = make_pilot_bits(scenario.n_pilot, stream)
    else:
        b_p = np.asarray(pilot_bits, dtype=np.float64)
        if b_p.shape[-1] != scenario.n_pilot:
            raise ValueError(
                f"pilot_bits length {b_p.shape[-1]} != n_pilot {scenario.n_pilot}"
            )
    b_r = _bits(stream, batch + (scenario.n_random,))

    tx_p = math.sqrt(scenario.p_b) * realization.h_b
    if scenario.p_e > 0.0:
        tx_p = tx_p + math.sqrt(scenario.p_e) * realization.h_e
    y_p = _rank1(tx_p, b_p) + sample_cscg(
        stream, batch + (m, scenario.n_pilot), scenario.sigma2_a
    )

    y_r = _rank1(math.sqrt(scenario.p_b) * realization.h_b, b_r) + sample_cscg(
        stream, batch + (m, scenario.n_random), scenario.sigma2_a
    )

    b_er: Optional[np.ndarray] = None
    eve_symbols: Optional[np.ndarray] = None
    if scenario.random_phase_attack != "none" and scenario.p_er > 0.0:
        if scenario.random_phase_attack == "random_bits":
            b_er = _bits(stream, batch + (scenario.n_random,))
            y_r = y_r + _rank1(math.sqrt(scenario.p_er) * realization.h_e, b_er)
        else:  # gaussian
            eve_symbols = sample_cscg(
                stream, batch + (scenario.n_random,), scenario.p_er
            )
            y_r = y_r + _rank1(realization.h_e, eve_symbols)

    return TrainingObservation(
        y_p=y_p,
        y_r=y_r,
        b_p=b_p,
        b_r=b_r,
        truth=realization,
        b_er=b_er,
        eve_symbols=eve_symbols,
    )
