"""Laplacian eigenbasis, band-pass wavelet kernel, scale ladder, and transform.

The transform of a node signal f at scale w is
    sum_i g(w * lambda_i) * (u_i . f) * u_i(j)
over the full eigensystem of the snapshot Laplacian. Scales are laid out so
the kernel's pass-band sweeps from the largest eigenvalue (highest-frequency
Fourier mode, index 0) down to the smallest positive one (lowest-frequency
mode, last index), geometrically spaced in between.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, NoSpectrumError

# Eigenvalues at or below this are treated as the zero mode.
POSITIVE_EIG_TOL = 1e-8

DEFAULT_KNOTS = (1.0, 2.0)


@dataclass(frozen=True)
class SpectralBasis:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class ScaleLadder:
    """Positive, nondecreasing wavelet scales; equal only in the degenerate
    single-band case (lambda_max == lambda_min+)."""

    scales: np.ndarray

    @property
    def r(self) -> int:
        return self.scales.shape[0]


def eigendecompose(laplacian: np.ndarray) -> SpectralBasis:
    """Dense symmetric eigendecomposition with round-off negatives clamped to 0."""
    laplacian = np.asarray(laplacian, dtype=np.float64)
    if laplacian.ndim != 2 or laplacian.shape[0] != laplacian.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {laplacian.shape}")
    if np.max(np.abs(laplacian - laplacian.T), initial=0.0) > 1e-10:
        raise ValueError("matrix is not symmetric within 1e-10")
    try:
        values, vectors = np.linalg.eigh(laplacian)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    values = np.where(values < 0.0, 0.0, values)
    return SpectralBasis(eigenvalues=values, eigenvectors=vectors)


@lru_cache(maxsize=8)
def _spline_coeffs(knot_low: float, knot_high: float) -> tuple[float, float, float, float]:
    """Cubic coefficients joining the monomial rise to the power decay with
    value 1 and matching slope at both knots."""
    x1, x2 = knot_low, knot_high
    system = np.array(
        [
            [x1**3, x1**2, x1, 1.0],
            [x2**3, x2**2, x2, 1.0],
            [3 * x1**2, 2 * x1, 1.0, 0.0],
            [3 * x2**2, 2 * x2, 1.0, 0.0],
        ]
    )
    rhs = np.array([1.0, 1.0, 2.0 / x1, -2.0 / x2])
    return tuple(np.linalg.solve(system, rhs))


def kernel_g(x, knots: tuple[float, float] = DEFAULT_KNOTS):
    """Band-pass kernel: quadratic rise below the first knot, cubic spline
    between the knots, inverse-square decay beyond. g(0) = 0, g(knot) = 1.

    With the default knots this is g(x) = x^2 on [0, 1],
    x^3 - 6x^2 + 11x - 5 on [1, 2], and 4/x^2 beyond 2.
    """
    x1, x2 = knots
    c3, c2, c1, c0 = _spline_coeffs(x1, x2)
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < 0):
        raise ValueError("kernel domain is x >= 0")
    out = np.empty_like(x)
    rise = x <= x1
    decay = x >= x2
    mid = ~(rise | decay)
    out[rise] = (x[rise] / x1) ** 2
    xm = x[mid]
    out[mid] = ((c3 * xm + c2) * xm + c1) * xm + c0
    with np.errstate(divide="ignore"):
        out[decay] = (x2 / x[decay]) ** 2
    return float(out[0]) if scalar else out


def scale_ladder(
    basis: SpectralBasis, r: int, knots: tuple[float, float] = DEFAULT_KNOTS
) -> ScaleLadder:
    """Geometric ladder aligning the kernel's upper knot with lambda_max at
    scale 0 and with the smallest positive eigenvalue at scale r-1."""
    if r < 2:
        raise ValueError(f"need at least 2 scales, got {r}")
    values = basis.eigenvalues
    positive = values[values > POSITIVE_EIG_TOL]
    if positive.size == 0:
        raise NoSpectrumError("all eigenvalues are numerically zero (empty graph)")
    lam_max = float(positive.max())
    lam_min = float(positive.min())
    first = knots[1] / lam_max
    last = knots[1] / lam_min
    scales = first * (last / first) ** (np.arange(r) / (r - 1))
    scales[0], scales[-1] = first, last
    return ScaleLadder(scales=scales)


def wavelet_transform(basis: SpectralBasis, ladder: ScaleLadder, signal: np.ndarray,
                      knots: tuple[float, float] = DEFAULT_KNOTS) -> np.ndarray:
    """Coefficient matrix of shape (r, n): row l holds the signal filtered at
    scale l, entry (l, j) the coefficient of node j."""
    signal = np.asarray(signal, dtype=np.float64).reshape(-1)
    if signal.shape[0] != basis.n:
        raise ValueError(
            f"signal length {signal.shape[0]} does not match basis size {basis.n}"
        )
    spectrum = basis.eigenvectors.T @ signal
    filters = kernel_g(np.outer(ladder.scales, basis.eigenvalues), knots)
    return (filters * spectrum) @ basis.eigenvectors.T


def zero_coefficients(r: int, n: int) -> np.ndarray:
    """All-zero coefficient matrix, the stand-in when no spectrum exists."""
    return np.zeros((r, n))
