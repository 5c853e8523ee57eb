"""Per-node, per-timestep activity scoring from wavelet coefficients.

For each snapshot the degree signal is wavelet-transformed, split into
low- and high-frequency aggregates, and combined into an activity
coefficient: the windowed change rate of the low-frequency part captures
temporal churn, the normalized high-frequency part captures topologically
critical (unsmooth) positions, and a gated sigmoid maps their mix into a
per-node time-travel budget clamped to [0, 1 - alpha].
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .config import StaaConfig, worker_count
from .errors import NoSpectrumError
from .graph import Snapshot, SnapshotSequence, binarized, degree_vector, laplacian, strip_self_loops, symmetrized
from .spectral import eigendecompose, scale_ladder, wavelet_transform, zero_coefficients

ACTIVITY_CSV_HEADER = ("t", "node", "a", "b", "delta_a", "delta_a_norm", "b_norm", "tau", "tau_norm", "beta")


@dataclass(frozen=True)
class ActivityTable:
    """All intermediate and final activity quantities, one row layout (T, n)."""

    timestamps: tuple[int, ...]
    a: np.ndarray
    b: np.ndarray
    delta_a: np.ndarray
    delta_a_norm: np.ndarray
    b_norm: np.ndarray
    tau: np.ndarray
    tau_norm: np.ndarray
    beta: np.ndarray

    @property
    def num_snapshots(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    def rows(self):
        """Yield one (t, node, ...) tuple per table cell, CSV column order."""
        for i, t in enumerate(self.timestamps):
            for j in range(self.n):
                yield (
                    t,
                    j,
                    self.a[i, j],
                    self.b[i, j],
                    self.delta_a[i, j],
                    self.delta_a_norm[i, j],
                    self.b_norm[i, j],
                    self.tau[i, j],
                    self.tau_norm[i, j],
                    self.beta[i, j],
                )

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ACTIVITY_CSV_HEADER)
        for row in self.rows():
            writer.writerow([row[0], row[1]] + [f"{v:.12g}" for v in row[2:]])


def frequency_split(coeffs: np.ndarray, cfg: StaaConfig) -> tuple[np.ndarray, np.ndarray]:
    """Exponentially weighted sums over the two halves of the scale ladder.

    Returns (a, b): a aggregates the upper (low-frequency) half with weights
    e^{decay * (l - r + 1)}, b the lower (high-frequency) half with weights
    e^{-decay * l}.
    """
    r = coeffs.shape[0]
    if r != cfg.num_scales:
        raise ValueError(f"coefficient matrix has {r} scales, config expects {cfg.num_scales}")
    half = r // 2
    low_weights = np.exp(cfg.decay * (np.arange(half, r) - r + 1))
    high_weights = np.exp(-cfg.decay * np.arange(0, half))
    a = low_weights @ coeffs[half:]
    b = high_weights @ coeffs[:half]
    return a, b


def change_rate(a_history: np.ndarray, cfg: StaaConfig) -> np.ndarray:
    """Mean absolute successive difference of the low-frequency aggregate over
    the trailing window. With one snapshot available (or window 1) there are
    no pairs and the rate is 0; shorter-than-window history truncates and the
    divisor becomes (available - 1)."""
    a_history = np.atleast_2d(np.asarray(a_history, dtype=np.float64))
    window = a_history[-cfg.window:] if cfg.window > 1 else a_history[-1:]
    if window.shape[0] < 2:
        return np.zeros(a_history.shape[1])
    return np.abs(np.diff(window, axis=0)).mean(axis=0)


def normalize_snapshot(values: np.ndarray, epsilon: float) -> np.ndarray:
    """Z-score across the node set with population standard deviation and an
    epsilon-guarded denominator."""
    values = np.asarray(values, dtype=np.float64)
    return (values - values.mean()) / (values.std() + epsilon)


def activity_coefficient(
    delta_a_norm: np.ndarray, b_norm: np.ndarray, cfg: StaaConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gate the normalized change rate against the normalized high-frequency
    content, re-normalize, squash, scale, and clamp to the walk budget.

    Returns (tau, tau_norm, beta) with beta in [0, 1 - alpha].
    """
    tau = cfg.gamma * delta_a_norm + (1.0 - cfg.gamma) * b_norm
    tau_norm = normalize_snapshot(tau, cfg.epsilon)
    beta = np.clip(cfg.delta * expit(tau_norm), 0.0, 1.0 - cfg.alpha)
    return tau, tau_norm, beta


def snapshot_frequency_profile(snapshot: Snapshot, cfg: StaaConfig) -> tuple[np.ndarray, np.ndarray]:
    """Low/high-frequency aggregates of one snapshot's degree signal.

    Self-loops are excluded from both the Laplacian and the signal; directed
    snapshots are symmetrized for this spectral stage only. A snapshot with
    no positive eigenvalue (no edges) yields all-zero aggregates.
    """
    base = strip_self_loops(snapshot)
    if cfg.binarize:
        base = binarized(base)
    if base.directed:
        base = symmetrized(base)
    basis = eigendecompose(laplacian(base))
    signal = degree_vector(base)
    try:
        ladder = scale_ladder(basis, cfg.num_scales, cfg.kernel_knots)
    except NoSpectrumError:
        coeffs = zero_coefficients(cfg.num_scales, base.n)
    else:
        coeffs = wavelet_transform(basis, ladder, signal, cfg.kernel_knots)
    return frequency_split(coeffs, cfg)


def build_activity(seq: SnapshotSequence, cfg: StaaConfig) -> ActivityTable:
    """Run the full scoring pipeline over a sequence.

    Per-snapshot spectral work is independent and runs on a thread pool
    (numpy's eigensolver releases the GIL); the temporal window is applied
    sequentially afterwards.
    """
    T, n = seq.num_snapshots, seq.n
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        profiles = list(pool.map(lambda s: snapshot_frequency_profile(s, cfg), seq.snapshots))
    a = np.stack([p[0] for p in profiles])
    b = np.stack([p[1] for p in profiles])

    delta_a = np.empty((T, n))
    delta_a_norm = np.empty((T, n))
    b_norm = np.empty((T, n))
    tau = np.empty((T, n))
    tau_norm = np.empty((T, n))
    beta = np.empty((T, n))
    for i in range(T):
        delta_a[i] = change_rate(a[: i + 1], cfg)
        delta_a_norm[i] = normalize_snapshot(delta_a[i], cfg.epsilon)
        b_norm[i] = normalize_snapshot(b[i], cfg.epsilon)
        tau[i], tau_norm[i], beta[i] = activity_coefficient(delta_a_norm[i], b_norm[i], cfg)
    return ActivityTable(
        timestamps=seq.timestamps,
        a=a,
        b=b,
        delta_a=delta_a,
        delta_a_norm=delta_a_norm,
        b_norm=b_norm,
        tau=tau,
        tau_norm=tau_norm,
        beta=beta,
    )
