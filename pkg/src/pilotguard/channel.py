"""Flat-fading MISO channel model and sampling.

The transmitter has ``m_antennas`` antennas; the legitimate receiver and the
eavesdropper each have one.  Channels follow block Rayleigh fading: one draw
stays constant for an entire training-plus-transmission trial, and uplink
reciprocity lets the same realization serve both link directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .numerics import sample_cscg

__all__ = ["ChannelModel", "ChannelRealization", "sample_channels"]


@dataclass(frozen=True)
class ChannelModel:
    """Large-scale description of the two uplink channels.

    ``alpha_b`` and ``alpha_e`` are the linear large-scale gains of the
    legitimate and eavesdropper channels; small-scale fading is unit-variance
    circularly symmetric complex Gaussian per antenna.
    """

    m_antennas: int
    alpha_b: float = 1.0
    alpha_e: float = 1.0

    def __post_init__(self) -> None:
        if int(self.m_antennas) != self.m_antennas or self.m_antennas < 2:
            raise ValueError(f"m_antennas must be an integer >= 2, got {self.m_antennas}")
        object.__setattr__(self, "m_antennas", int(self.m_antennas))
        for name in ("alpha_b", "alpha_e"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class ChannelRealization:
    """One independent draw of the legitimate (h_b) and eavesdropper (h_e)
    channel vectors.  Arrays may carry leading batch axes; the trailing axis
    is the antenna index."""

    h_b: np.ndarray
    h_e: np.ndarray

    def __post_init__(self) -> None:
        h_b = np.asarray(self.h_b, dtype=complex)
        h_e = np.asarray(self.h_e, dtype=complex)
        if h_b.shape != h_e.shape:
            raise ValueError(f"channel shapes differ: {h_b.shape} vs {h_e.shape}")
        if h_b.shape[-1] < 1:
            raise ValueError("channel vectors must have at least one antenna entry")
        if not (np.isfinite(h_b).all() and np.isfinite(h_e).all()):
            raise ValueError("channel entries must be finite")
        object.__setattr__(self, "h_b", h_b)
        object.__setattr__(self, "h_e", h_e)

    @property
    def m_antennas(self) -> int:
        return self.h_b.shape[-1]


def sample_channels(
    model: ChannelModel,
    stream: np.random.Generator,
    size: Optional[Union[int, Tuple[int, ...]]] = None,
) -> ChannelRealization:
    """Draw one (or a batch of) independent channel realizations.

    Each vector is ``sqrt(alpha) * g`` with ``g`` circularly symmetric
    complex Gaussian of unit element variance.  ``size=None`` gives vectors
    of shape ``(M,)``; an int or tuple prepends batch axes.  The legitimate
    draw consumes the stream before the eavesdropper draw, so the two are
    independent but jointly reproducible.
    """
    if size is None:
        batch: Tuple[int, ...] = ()
    elif isinstance(size, (int, np.integer)):
        batch = (int(size),)
    else:
        batch = tuple(int(s) for s in size)
    shape = batch + (model.m_antennas,)
    h_b = math.sqrt(model.alpha_b) * sample_cscg(stream, shape, 1.0)
    h_e = math.sqrt(model.alpha_e) * sample_cscg(stream, shape, 1.0)
    return ChannelRealization(h_b=h_b, h_e=h_e)
