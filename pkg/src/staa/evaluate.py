"""Decoder-free link-prediction scoring and the noise-suppression report.

Edge scores are raw symmetrized diffusion entries, so the evaluation
isolates what the augmenter contributed; AUC is the exact Mann-Whitney
statistic with half credit for ties. The suppression report compares the
augmented weight mass sitting on labeled noise slots against persistent
slots, per timestep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.stats import rankdata

from .errors import DegenerateError, ExhaustedError
from .graph import Snapshot
from .synth import NOISE, PERSISTENT

EVAL_CSV_HEADER = ("augmenter", "t", "auc", "noise_mean", "persistent_mean", "suppression_ratio")


@dataclass(frozen=True)
class ScoredPairs:
    """Scored positive and negative node pairs, balanced and deduplicated."""

    pairs: tuple[tuple[int, int], ...]
    scores: np.ndarray
    positive: np.ndarray  # bool mask

    def __post_init__(self) -> None:
        if len(set(self.pairs)) != len(self.pairs):
            raise ValueError("duplicate pair in scored set")
        n_pos = int(self.positive.sum())
        if n_pos * 2 != len(self.pairs):
            raise ValueError("positive and negative counts must be equal")


def _as_sparse(matrix) -> sp.csr_array:
    if isinstance(matrix, sp.csr_array):
        return matrix
    return sp.csr_array(matrix)


def score_edges(matrix, pairs) -> np.ndarray:
    """Symmetrized entry per pair: X[u, v] + X[v, u], 0 when absent."""
    m = _as_sparse(matrix)
    n = m.shape[0]
    scores = np.empty(len(pairs))
    for i, (u, v) in enumerate(pairs):
        if not (0 <= u < n and 0 <= v < n):
            raise IndexError(f"pair ({u}, {v}) out of range for n={n}")
        scores[i] = m[u, v] + m[v, u]
    return scores


def sample_negatives(snapshot_next: Snapshot, count: int, seed: int) -> list[tuple[int, int]]:
    """Uniform sample without replacement from unordered non-edge pairs
    (u < v) of the target snapshot; deterministic under the seed."""
    n = snapshot_next.n
    present = snapshot_next.matrix.maximum(snapshot_next.matrix.T)
    dense = present.toarray() > 0
    iu, ju = np.triu_indices(n, k=1)
    absent = ~dense[iu, ju]
    candidates_u, candidates_v = iu[absent], ju[absent]
    available = candidates_u.shape[0]
    if count > available:
        raise ExhaustedError(f"requested {count} negatives, only {available} non-edges exist")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(available, size=count, replace=False)
    chosen.sort()
    return [(int(candidates_u[i]), int(candidates_v[i])) for i in chosen]


def auc(scored: ScoredPairs) -> float:
    """Exact rank AUC: P(score_pos > score_neg) + 0.5 * P(tie)."""
    return auc_from_scores(scored.scores[scored.positive], scored.scores[~scored.positive])


def auc_from_scores(positive_scores: np.ndarray, negative_scores: np.ndarray) -> float:
    positive_scores = np.asarray(positive_scores, dtype=np.float64)
    negative_scores = np.asarray(negative_scores, dtype=np.float64)
    n_pos, n_neg = positive_scores.shape[0], negative_scores.shape[0]
    if n_pos == 0 or n_neg == 0:
        raise DegenerateError("AUC needs at least one positive and one negative")
    ranks = rankdata(np.concatenate([positive_scores, negative_scores]))
    u_stat = ranks[:n_pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_stat / (n_pos * n_neg))


def positive_pairs(snapshot: Snapshot) -> list[tuple[int, int]]:
    """Distinct unordered edges (u < v) of a snapshot, self-loops excluded."""
    coo = snapshot.matrix.maximum(snapshot.matrix.T).tocoo()
    keep = coo.row < coo.col
    return sorted(zip((int(u) for u in coo.row[keep]), (int(v) for v in coo.col[keep])))


def build_scored_pairs(matrix, snapshot_next: Snapshot, seed: int) -> ScoredPairs:
    """Balanced positives (edges of the target snapshot) and sampled negatives."""
    positives = positive_pairs(snapshot_next)
    if not positives:
        raise DegenerateError("target snapshot has no edges to use as positives")
    negatives = sample_negatives(snapshot_next, len(positives), seed)
    pairs = positives + negatives
    scores = score_edges(matrix, pairs)
    mask = np.zeros(len(pairs), dtype=bool)
    mask[: len(positives)] = True
    return ScoredPairs(pairs=tuple(pairs), scores=scores, positive=mask)


def _slot_means(matrix, slots: list[tuple[int, int]]) -> float:
    if not slots:
        return float("nan")
    m = _as_sparse(matrix)
    values = [(m[u, v] + m[v, u]) / 2.0 for u, v in slots]
    return float(np.mean(values))


def suppression_ratio(noise_mean: float, persistent_mean: float) -> float:
    if persistent_mean > 0.0:
        return noise_mean / persistent_mean
    return 0.0 if noise_mean == 0.0 else float("inf")


def noise_suppression(matrices, labels) -> list[dict]:
    """Per-timestep mean augmented weight on noise vs persistent slots.

    matrices: mapping or list of (t, matrix); labels: (t, u, v, label) tuples
    from the generator. Weight of a slot is the symmetrized half-sum, so an
    unaugmented unit-weight adjacency scores exactly 1 per slot.
    """
    by_t: dict[int, dict[str, list[tuple[int, int]]]] = {}
    for t, u, v, label in labels:
        by_t.setdefault(t, {PERSISTENT: [], NOISE: []})[label].append((u, v))
    matrix_by_t = dict(matrices.items() if isinstance(matrices, dict) else matrices)
    report = []
    for t in sorted(by_t):
        if t not in matrix_by_t:
            continue
        noise_mean = _slot_means(matrix_by_t[t], by_t[t][NOISE])
        persistent_mean = _slot_means(matrix_by_t[t], by_t[t][PERSISTENT])
        report.append(
            {
                "t": t,
                "noise_mean": noise_mean,
                "persistent_mean": persistent_mean,
                "suppression_ratio": suppression_ratio(noise_mean, persistent_mean),
            }
        )
    return report


def link_prediction_report(
    matrices, truth: Snapshot, seed: int, labels=None, augmenter: str = "unknown"
) -> list[dict]:
    """One row per timestep: AUC of that timestep's matrix against the truth
    snapshot, plus suppression columns when labels are available."""
    matrix_by_t = dict(matrices.items() if isinstance(matrices, dict) else matrices)
    suppression = {row["t"]: row for row in noise_suppression(matrix_by_t, labels)} if labels else {}
    rows = []
    for t in sorted(matrix_by_t):
        scored = build_scored_pairs(matrix_by_t[t], truth, seed)
        extra = suppression.get(
            t, {"noise_mean": float("nan"), "persistent_mean": float("nan"),
                "suppression_ratio": float("nan")}
        )
        rows.append(
            {
                "augmenter": augmenter,
                "t": t,
                "auc": auc(scored),
                "noise_mean": extra["noise_mean"],
                "persistent_mean": extra["persistent_mean"],
                "suppression_ratio": extra["suppression_ratio"],
            }
        )
    return rows
