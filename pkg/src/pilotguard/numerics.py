"""Shared numerical kernels: seedable random streams, circularly symmetric
complex Gaussian sampling, and even-degree chi-square special functions.

Complex vectors and matrices are plain ``numpy`` arrays with dtype
``complex128``.  Random streams are ``numpy.random.Generator`` instances;
independent substreams are derived from a root seed plus an integer path,
so concurrent work never shares generator state.
"""

from __future__ import annotations

import math
from typing import Tuple, Union

import numpy as np

__all__ = [
    "make_stream",
    "substream",
    "sample_cscg",
    "hermitian_inner",
    "chi2_even_cdf",
    "chi2_even_quantile",
    "chi2_even_pdf",
]

_SEED_MASK = (1 << 64) - 1

# Absolute probability tolerance met by chi2_even_quantile; chosen so that
# thresholds for false-alarm targets as small as 1e-4 are fully resolved.
QUANTILE_TOL = 1e-12


def make_stream(seed: int) -> np.random.Generator:
    """Create a deterministic random stream from a 64-bit integer seed.

    The same seed always yields the bit-identical sample sequence.
    """
    return np.random.default_rng(np.random.SeedSequence(int(seed) & _SEED_MASK))


def substream(seed: int, *path: int) -> np.random.Generator:
    """Derive an independent stream from ``seed`` and an integer path.

    Distinct paths give statistically independent streams; the derivation is
    deterministic, so (seed, path) fully identifies the sample sequence.
    """
    key = tuple(int(p) for p in path)
    ss = np.random.SeedSequence(int(seed) & _SEED_MASK, spawn_key=key)
    return np.random.default_rng(ss)


def sample_cscg(
    stream: np.random.Generator,
    dim: Union[int, Tuple[int, ...]],
    variance: float,
) -> np.ndarray:
    """Draw circularly symmetric complex Gaussian samples.

    Each element is ``x + 1j*y`` with ``x`` and ``y`` independent zero-mean
    Gaussians of variance ``variance / 2``, so the complex element variance
    is ``variance``.  ``dim`` may be an int (vector) or a shape tuple.
    """
    if isinstance(dim, (int, np.integer)):
        shape: Tuple[int, ...] = (int(dim),)
    else:
        shape = tuple(int(d) for d in dim)
    if any(d < 1 for d in shape):
        raise ValueError(f"sample dimensions must be positive, got {shape}")
    variance = float(variance)
    if not math.isfinite(variance) or variance < 0.0:
        raise ValueError(f"variance must be finite and >= 0, got {variance}")
    scale = math.sqrt(variance / 2.0)
    real = stream.standard_normal(shape)
    imag = stream.standard_normal(shape)
    return scale * (real + 1j * imag)


def hermitian_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Return ``sum(conj(a_i) * b_i)`` for equal-length vectors.

    ``hermitian_inner(a, a)`` is real and equals ``norm(a) ** 2``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ValueError(f"expected equal-length vectors, got {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def _series_terms(m: int, x: float) -> Tuple[float, float]:
    """Return (partial sum of the first m Poisson terms, last term).

    The terms are ``exp(-x/2) * (x/2)^k / k!`` for k = 0..m-1, computed by
    the stable forward recurrence so no intermediate overflows.
    """
    half = 0.5 * x
    term = math.exp(-half)
    total = term
    for k in range(1, m):
        term *= half / k
        total += term
    return total, term


def chi2_even_cdf(dof_half: int, x: float) -> float:
    """CDF of a chi-square variable with ``2 * dof_half`` degrees of freedom.

    Even degrees of freedom admit the exact closed form
    ``F(x) = 1 - exp(-x/2) * sum_{k=0}^{M-1} (x/2)^k / k!`` with
    ``M = dof_half``; this evaluates it directly (no incomplete-gamma
    library call), clamped into [0, 1] against rounding.
    """
    m = int(dof_half)
    if m < 1:
        raise ValueError(f"dof_half must be >= 1, got {dof_half}")
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    total, _ = _series_terms(m, x)
    return min(1.0, max(0.0, 1.0 - total))


def chi2_even_pdf(dof_half: int, x: float) -> float:
    """Density of a chi-square variable with ``2 * dof_half`` degrees of freedom."""
    m = int(dof_half)
    if m < 1:
        raise ValueError(f"dof_half must be >= 1, got {dof_half}")
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0.0:
        return 0.5 if m == 1 else 0.0
    _, last = _series_terms(m, x)
    return 0.5 * last


def chi2_even_quantile(dof_half: int, p: float) -> float:
    """Inverse CDF: the x with ``chi2_even_cdf(dof_half, x) == p``.

    Solved by bracketing plus bisection with a Newton polish; the result
    satisfies ``|chi2_even_cdf(dof_half, x) - p| <= 1e-12``.
    Requires ``0 <= p < 1``.
    """
    m = int(dof_half)
    if m < 1:
        raise ValueError(f"dof_half must be >= 1, got {dof_half}")
    p = float(p)
    if math.isnan(p) or p < 0.0 or p >= 1.0:
        raise ValueError(f"p must lie in [0, 1), got {p}")
    if p == 0.0:
        return 0.0

    # Bracket the root: the mean of the distribution is 2m, the standard
    # deviation 2*sqrt(m); expand the upper edge until the CDF exceeds p.
    lo = 0.0
    hi = 2.0 * m + 10.0 * (2.0 * math.sqrt(m)) + 10.0
    while chi2_even_cdf(m, hi) < p:
        hi *= 2.0

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = chi2_even_cdf(m, mid)
        if f_mid < p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * (1.0 + mid):
            break

    x = 0.5 * (lo + hi)
    # Newton polish to push the probability residual below the tolerance.
    for _ in range(4):
        err = chi2_even_cdf(m, x) - p
        if abs(err) <= 0.1 * QUANTILE_TOL:
            break
        slope = chi2_even_pdf(m, x)
        if slope <= 0.0:
            break
        step = err / slope
        candidate = x - step
        if candidate <= lo or candidate >= hi:
            break
        x = candidate
    return x
