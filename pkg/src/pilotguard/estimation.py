"""Channel estimation from training observations.

Three estimators are provided:

* ``ls_estimate`` — one-shot least squares against a known ±1 bit sequence.
* ``ils_estimate`` — blind iterative least squares for the random phase:
  alternate hard bit decisions and LS re-estimation until the decided bit
  vector repeats (a fixed point) or an iteration cap is hit.
* ``cee_estimate`` — estimation enhancement: re-detect the random-phase bits,
  then run a combined LS over both phases' observations, iterating the pair
  until the detected bits repeat.

Every function accepts leading batch axes on its array arguments; the
single-trial forms are the degenerate case.  Bit vectors are float64 arrays
whose entries are exactly ±1.
"""

from __future__ import annotations

from typing import Optional, Tuple, Union

import numpy as np

__all__ = [
    "ls_estimate",
    "ils_estimate",
    "cee_estimate",
    "align_sign",
    "normalized_mse",
    "hard_bits",
    "ILS_MAX_ITER",
    "CEE_MAX_ITER",
]

# Safety valves: the alternating updates typically fix within a handful of
# passes, so the caps only guard against pathological inputs.
ILS_MAX_ITER = 100
CEE_MAX_ITER = 20

# Slack for the nonincreasing-residual assertion, relative to scale.
_RESIDUAL_SLACK = 1e-9


def _check_obs(y: np.ndarray, name: str = "y") -> np.ndarray:
    y = np.asarray(y, dtype=complex)
    if y.ndim < 2:
        raise ValueError(f"{name} must be at least 2-D (antennas x symbols), got {y.ndim}-D")
    return y


def ls_estimate(y: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Least-squares channel estimate ``(1/N) Y b`` for ±1 training bits.

    ``y`` has shape (..., M, N) and ``bits`` shape (N,) or (..., N); the
    result has shape (..., M).  With noiseless ``Y = h b^T`` this returns
    ``h`` exactly, and it is linear in ``y``.
    """
    y = _check_obs(y)
    bits = np.asarray(bits, dtype=np.float64)
    n = y.shape[-1]
    if bits.shape[-1] != n:
        raise ValueError(f"bit length {bits.shape[-1]} != symbol count {n}")
    if bits.ndim == 1:
        out = np.einsum("...mn,n->...m", y, bits)
    else:
        out = np.einsum("...mn,...n->...m", y, bits)
    return out / n


def hard_bits(h: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matched-filter hard bit decisions ``sign(Re[h^H Y])`` with sign(0) := +1."""
    corr = np.einsum("...m,...mn->...n", np.conj(h), y).real
    return np.where(corr >= 0.0, 1.0, -1.0)


def _residual(y: np.ndarray, h: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Frobenius residual ``norm(Y - h b^T)`` per batch element."""
    diff = y - h[..., :, None] * bits[..., None, :]
    return np.sqrt(np.sum(np.abs(diff) ** 2, axis=(-2, -1)))


def ils_estimate(
    y_r: np.ndarray,
    init: np.ndarray,
    max_iter: int = ILS_MAX_ITER,
) -> Tuple[np.ndarray, np.ndarray, Union[int, np.ndarray]]:
    """Blind iterative least squares on the random-phase observation.

    Starting from the channel guess ``init`` (shape (..., M), typically the
    pilot-phase estimate), alternate

    1. ``b = sign(Re[h^H Y_r])``  (hard bit decisions), then
    2. ``h = (1/N_r) Y_r b``      (LS re-estimate),

    until the decided bit vector repeats, which fixes the estimate too.
    Returns ``(h, bits, iterations)`` where ``iterations`` counts completed
    refinement passes (an int for single trials, an int array for batches);
    ``iterations == max_iter`` flags a cap hit, with the last iterate
    returned rather than an error raised.

    Bits are recovered up to a global sign; see ``align_sign``.  The
    Frobenius residual ``norm(Y_r - h b^T)`` is nonincreasing across passes
    (each step is an exact coordinate minimizer), and this is asserted on
    every run.
    """
    y_r = _check_obs(y_r, "y_r")
    h = np.asarray(init, dtype=complex)
    if h.shape != y_r.shape[:-1]:
        raise ValueError(f"init shape {h.shape} incompatible with y_r shape {y_r.shape}")
    if np.any(np.linalg.norm(h, axis=-1) == 0.0):
        raise ValueError("init must be nonzero")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    batch = y_r.shape[:-2]
    n = y_r.shape[-1]
    iterations = np.full(batch, max_iter, dtype=np.int64)
    converged = np.zeros(batch, dtype=bool)
    prev_bits: Optional[np.ndarray] = None
    prev_resid: Optional[np.ndarray] = None

    for count in range(1, max_iter + 1):
        bits = hard_bits(h, y_r)
        if prev_bits is not None:
            repeated = np.all(bits == prev_bits, axis=-1)
            newly = repeated & ~converged
            iterations[newly] = count - 1
            converged |= repeated
            if converged.all():
                # The repeated decision leaves the estimate unchanged, so the
                # last computed h already matches these bits.
                break
        h = ls_estimate(y_r, bits)
        resid = _residual(y_r, h, bits)
        if prev_resid is not None:
            slack = _RESIDUAL_SLACK * (1.0 + prev_resid)
            assert np.all(resid <= prev_resid + slack), (
                "iterative LS residual increased, which contradicts the "
                "alternating-minimization guarantee"
            )
        prev_resid = resid
        prev_bits = bits

    if not batch:
        return h, bits, int(iterations)
    return h, bits, iterations


def cee_estimate(
    h_bp: np.ndarray,
    y_p: np.ndarray,
    y_r: np.ndarray,
    b_p: np.ndarray,
    max_iter: int = CEE_MAX_ITER,
) -> Tuple[np.ndarray, Union[int, np.ndarray]]:
    """Enhanced channel estimate combining both training phases.

    Starting from the pilot-phase estimate ``h_bp``, iterate

    1. ``b_r = sign(Re[h^H Y_r])``  (random-bit re-detection), then
    2. LS over the concatenated observation ``[Y_p, Y_r]`` against the
       concatenated bits ``[b_p, b_r]``,

    until the detected bits repeat.  The known pilot bits anchor the global
    sign, so no alignment step is needed.  Returns ``(h, iterations)`` with
    the same iteration-count semantics as ``ils_estimate``.
    """
    y_p = _check_obs(y_p, "y_p")
    y_r = _check_obs(y_r, "y_r")
    h = np.asarray(h_bp, dtype=complex)
    if h.shape != y_p.shape[:-1] or h.shape != y_r.shape[:-1]:
        raise ValueError(
            f"h_bp shape {h.shape} incompatible with observations "
            f"{y_p.shape} / {y_r.shape}"
        )
    if np.any(np.linalg.norm(h, axis=-1) == 0.0):
        raise ValueError("h_bp must be nonzero")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    b_p = np.asarray(b_p, dtype=np.float64)
    n_p = y_p.shape[-1]
    n_r = y_r.shape[-1]
    if b_p.shape[-1] != n_p:
        raise ValueError(f"pilot bit length {b_p.shape[-1]} != symbol count {n_p}")

    batch = y_r.shape[:-2]
    y_c = np.concatenate([np.broadcast_to(y_p, batch + y_p.shape[-2:]), y_r], axis=-1)
    b_p_full = np.broadcast_to(b_p, batch + (n_p,))

    iterations = np.full(batch, max_iter, dtype=np.int64)
    converged = np.zeros(batch, dtype=bool)
    prev_bits: Optional[np.ndarray] = None

    for count in range(1, max_iter + 1):
        bits = hard_bits(h, y_r)
        if prev_bits is not None:
            repeated = np.all(bits == prev_bits, axis=-1)
            newly = repeated & ~converged
            iterations[newly] = count - 1
            converged |= repeated
            if converged.all():
                break
        b_c = np.concatenate([b_p_full, bits], axis=-1)
        h = ls_estimate(y_c, b_c)
        prev_bits = bits

    if not batch:
        return h, int(iterations)
    return h, iterations


def align_sign(reference: np.ndarray, estimate: np.ndarray) -> np.ndarray:
    """Resolve the global ±1 sign ambiguity of a blind estimate.

    Returns ``s * estimate`` with ``s`` in {+1, -1} chosen to minimize
    ``norm(reference - s * estimate)``, i.e. the sign of
    ``Re[<reference, estimate>]`` (zero resolving to +1).  Works over
    leading batch axes.
    """
    reference = np.asarray(reference, dtype=complex)
    estimate = np.asarray(estimate, dtype=complex)
    if reference.shape != estimate.shape:
        raise ValueError(
            f"shape mismatch: {reference.shape} vs {estimate.shape}"
        )
    corr = np.sum(np.conj(reference) * estimate, axis=-1).real
    sign = np.where(corr >= 0.0, 1.0, -1.0)
    return estimate * sign[..., None]


def normalized_mse(h_true: np.ndarray, h_est: np.ndarray) -> Union[float, np.ndarray]:
    """Scale-invariant squared estimation error.

    Both vectors are normalized to unit length before differencing:
    ``norm(h_true/|h_true| - h_est/|h_est|)^2``, which lies in [0, 4]
    (0 for positive scalings of the truth, 4 for antipodal estimates).
    """
    h_true = np.asarray(h_true, dtype=complex)
    h_est = np.asarray(h_est, dtype=complex)
    if h_true.shape != h_est.shape:
        raise ValueError(f"shape mismatch: {h_true.shape} vs {h_est.shape}")
    norm_true = np.linalg.norm(h_true, axis=-1, keepdims=True)
    norm_est = np.linalg.norm(h_est, axis=-1, keepdims=True)
    if np.any(norm_true == 0.0) or np.any(norm_est == 0.0):
        raise ValueError("normalized_mse requires nonzero vectors")
    diff = h_true / norm_true - h_est / norm_est
    out = np.sum(np.abs(diff) ** 2, axis=-1)
    if out.ndim == 0:
        return float(out)
    return out
