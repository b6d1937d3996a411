"""Downlink beamformer designs and secrecy-rate bookkeeping.

All beamformers return unit-norm complex vectors:

* ``mrt_beamformer`` — maximum ratio transmission along a channel estimate.
* ``zf_beamformer`` — beam toward the legitimate channel projected
  orthogonal to the (estimated) attacker channel, forcing the attacker's
  receive SNR to zero.
* ``ged_beamformer`` — the secrecy-optimal direction: the dominant
  generalized eigenvector of the pencil formed from the two channel outer
  products, which globally maximizes the secrecy Rayleigh quotient.

Rates use base-2 logarithms (bits/s/Hz).
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

__all__ = [
    "DegenerateGeometryError",
    "mrt_beamformer",
    "zf_beamformer",
    "ged_beamformer",
    "instantaneous_snr",
    "secrecy_rate",
]

# Below this norm the attacker-channel estimate carries no usable direction.
_NULL_DIRECTION_TOL = 1e-12
# Projection-to-reference ratio below which the two channels are parallel.
_PARALLEL_TOL = 1e-12


class DegenerateGeometryError(ValueError):
    """The two channel estimates are (numerically) parallel, so no direction
    can serve the legitimate receiver while nulling the attacker.  Callers
    typically treat the trial as lost (zero secrecy rate)."""


def _as_vector(h: np.ndarray, name: str) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 1 or h.shape[0] < 1:
        raise ValueError(f"{name} must be a 1-D complex vector, got shape {h.shape}")
    if not np.isfinite(h).all():
        raise ValueError(f"{name} must have finite entries")
    return h


def mrt_beamformer(h_hat: np.ndarray) -> np.ndarray:
    """Unit-norm beam along the given channel estimate."""
    h_hat = _as_vector(h_hat, "h_hat")
    norm = np.linalg.norm(h_hat)
    if norm == 0.0:
        raise ValueError("mrt_beamformer requires a nonzero channel estimate")
    return h_hat / norm


def zf_beamformer(h_b_hat: np.ndarray, h_e_hat: np.ndarray) -> np.ndarray:
    """Beam toward ``h_b_hat`` with the attacker direction projected out.

    Returns the normalized ``(I - u u^H) h_b_hat`` where ``u`` is the unit
    attacker direction, so ``<h_e_hat, w> == 0`` up to rounding.  If the
    attacker estimate is numerically zero there is nothing to null and the
    MRT beam is returned.  If the two estimates are numerically parallel the
    projection vanishes and ``DegenerateGeometryError`` is raised.
    """
    h_b_hat = _as_vector(h_b_hat, "h_b_hat")
    h_e_hat = _as_vector(h_e_hat, "h_e_hat")
    if h_b_hat.shape != h_e_hat.shape:
        raise ValueError(
            f"shape mismatch: {h_b_hat.shape} vs {h_e_hat.shape}"
        )
    norm_b = np.linalg.norm(h_b_hat)
    if norm_b == 0.0:
        raise ValueError("zf_beamformer requires a nonzero legitimate estimate")
    norm_e = np.linalg.norm(h_e_hat)
    if norm_e <= _NULL_DIRECTION_TOL:
        return mrt_beamformer(h_b_hat)
    projected = h_b_hat - h_e_hat * (np.vdot(h_e_hat, h_b_hat) / (norm_e * norm_e))
    norm_p = np.linalg.norm(projected)
    if norm_p <= _PARALLEL_TOL * norm_b:
        raise DegenerateGeometryError(
            "legitimate and attacker channel estimates are parallel; "
            "nulling the attacker would also null the legitimate receiver"
        )
    return projected / norm_p


def ged_beamformer(
    h_b: np.ndarray,
    h_e: np.ndarray,
    phi: float,
    psi: float,
) -> np.ndarray:
    """Secrecy-optimal unit beam for channels ``h_b`` (legitimate) and
    ``h_e`` (attacker).

    Maximizes the Rayleigh quotient
    ``(w^H (I + phi h_b h_b^H) w) / (w^H (I + psi h_e h_e^H) w)``
    with ``phi = p_tx / sigma2_b`` and ``psi = p_tx / sigma2_e``, by solving
    the Hermitian generalized eigenproblem of the small M x M pencil
    directly and taking the eigenvector of the largest eigenvalue.  The
    global phase is fixed so ``<h_b, w>`` is real and nonnegative.
    """
    h_b = _as_vector(h_b, "h_b")
    h_e = _as_vector(h_e, "h_e")
    if h_b.shape != h_e.shape:
        raise ValueError(f"shape mismatch: {h_b.shape} vs {h_e.shape}")
    if np.linalg.norm(h_b) == 0.0:
        raise ValueError("ged_beamformer requires a nonzero legitimate channel")
    phi = float(phi)
    psi = float(psi)
    if not (math.isfinite(phi) and math.isfinite(psi)) or phi < 0.0 or psi < 0.0:
        raise ValueError(f"phi and psi must be finite and >= 0, got {phi}, {psi}")
    m = h_b.shape[0]
    eye = np.eye(m, dtype=complex)
    gain = eye + phi * np.outer(h_b, np.conj(h_b))
    leak = eye + psi * np.outer(h_e, np.conj(h_e))
    _, vectors = scipy.linalg.eigh(gain, leak)
    w = vectors[:, -1]
    w = w / np.linalg.norm(w)
    inner = np.vdot(h_b, w)
    if abs(inner) > 1e-15:
        w = w * (np.conj(inner) / abs(inner))
    return w


def instantaneous_snr(
    h: np.ndarray,
    w: np.ndarray,
    p_tx: float,
    sigma2: float,
) -> float:
    """Receive SNR ``p_tx * |h^H w|^2 / sigma2`` for a beam ``w``."""
    h = _as_vector(h, "h")
    w = _as_vector(w, "w")
    if h.shape != w.shape:
        raise ValueError(f"shape mismatch: {h.shape} vs {w.shape}")
    if p_tx < 0.0:
        raise ValueError(f"p_tx must be >= 0, got {p_tx}")
    if sigma2 <= 0.0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    return p_tx * abs(np.vdot(h, w)) ** 2 / sigma2


def secrecy_rate(snr_b: float, snr_e: float) -> float:
    """Nonnegative part of the legitimate-minus-attacker rate difference,
    ``max(0, log2(1 + snr_b) - log2(1 + snr_e))``."""
    if snr_b < 0.0 or snr_e < 0.0:
        raise ValueError(f"SNRs must be >= 0, got {snr_b}, {snr_e}")
    return max(0.0, math.log2(1.0 + snr_b) - math.log2(1.0 + snr_e))
