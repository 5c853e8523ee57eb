"""Synthetic noisy dynamic graphs: a persistent community backbone plus
transient edges on a designated set of active nodes.

The backbone is one stochastic-block-model draw shared by every snapshot.
Active nodes additionally receive one-snapshot noise edges and may have
their backbone edges temporarily rewired, so their structure churns while
inert nodes stay fixed. The ground-truth next snapshot contains the
backbone only: a good augmenter should rank persistent edges above the
expired transients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpecError
from .graph import Snapshot, SnapshotSequence

PERSISTENT = "persistent"
NOISE = "noise"

_MAX_RESAMPLE = 100


@dataclass(frozen=True)
class SynthSpec:
    n: int = 100
    communities: int = 4
    snapshots: int = 8
    p_in: float = 0.1
    p_out: float = 0.005
    active_fraction: float = 0.2
    noise_rate: float = 0.1
    churn_rate: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1 or self.snapshots < 1:
            raise ValueError("n and snapshots must be >= 1")
        if not 1 <= self.communities <= self.n:
            raise ValueError("communities must be in [1, n]")
        for name in ("p_in", "p_out", "active_fraction", "noise_rate", "churn_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class SynthResult:
    sequence: SnapshotSequence
    labels: tuple[tuple[int, int, int, str], ...]  # (t, u, v, label), u < v
    active_nodes: tuple[int, ...]
    next_snapshot: Snapshot


def _community_of(n: int, k: int) -> np.ndarray:
    return (np.arange(n) * k) // n


def _expected_degree(spec: SynthSpec) -> float:
    comm = _community_of(spec.n, spec.communities)
    sizes = np.bincount(comm, minlength=spec.communities)
    within = sizes[comm] - 1
    across = spec.n - sizes[comm]
    return float(np.mean(within * spec.p_in + across * spec.p_out))


def _sample_backbone(spec: SynthSpec, rng: np.random.Generator) -> list[tuple[int, int]]:
    comm = _community_of(spec.n, spec.communities)
    draws = rng.random((spec.n, spec.n))
    same = comm[:, None] == comm[None, :]
    prob = np.where(same, spec.p_in, spec.p_out)
    upper = np.triu(draws < prob, k=1)
    rows, cols = np.nonzero(upper)
    return [(int(u), int(v)) for u, v in zip(rows, cols)]


def _random_partner(u: int, present: set, spec: SynthSpec, rng: np.random.Generator) -> int | None:
    """Uniform endpoint for a transient edge at u, avoiding collisions."""
    if spec.n < 2:
        return None
    for _ in range(_MAX_RESAMPLE):
        w = int(rng.integers(0, spec.n))
        if w == u:
            continue
        pair = (min(u, w), max(u, w))
        if pair not in present:
            return w
    return None


def generate(spec: SynthSpec) -> SynthResult:
    """Deterministic under spec.seed: identical specs yield identical results."""
    if _expected_degree(spec) < 1.0:
        raise DegenerateSpecError(
            f"expected persistent degree {_expected_degree(spec):.3f} < 1; "
            "raise p_in/p_out or n"
        )
    rng = np.random.default_rng(spec.seed)
    backbone = _sample_backbone(spec, rng)
    backbone_set = set(backbone)

    active_count = int(round(spec.active_fraction * spec.n))
    active = tuple(sorted(int(v) for v in rng.choice(spec.n, size=active_count, replace=False)))
    active_set = set(active)

    snapshots: list[Snapshot] = []
    labels: list[tuple[int, int, int, str]] = []
    for t in range(1, spec.snapshots + 1):
        present: dict[tuple[int, int], str] = {}
        # backbone, with per-snapshot churn on active-incident edges
        for u, v in backbone:
            if spec.churn_rate > 0.0 and (u in active_set or v in active_set):
                if rng.random() < spec.churn_rate:
                    anchor = u if u in active_set else v
                    partner = _random_partner(anchor, present.keys() | backbone_set, spec, rng)
                    if partner is not None:
                        pair = (min(anchor, partner), max(anchor, partner))
                        present[pair] = NOISE
                    continue
            present[(u, v)] = PERSISTENT
        # one-snapshot noise edges on active nodes; never collide with the
        # backbone, or a churned-away persistent pair would be labeled noise
        for u in active:
            if spec.noise_rate > 0.0 and rng.random() < spec.noise_rate:
                partner = _random_partner(u, present.keys() | backbone_set, spec, rng)
                if partner is not None:
                    pair = (min(u, partner), max(u, partner))
                    present[pair] = NOISE

        pairs = sorted(present)
        rows = [p[0] for p in pairs] + [p[1] for p in pairs]
        cols = [p[1] for p in pairs] + [p[0] for p in pairs]
        snapshots.append(Snapshot.from_edges(spec.n, rows, cols, directed=False))
        labels.extend((t, u, v, present[(u, v)]) for u, v in pairs)

    rows = [u for u, _ in backbone] + [v for _, v in backbone]
    cols = [v for _, v in backbone] + [u for u, _ in backbone]
    truth = Snapshot.from_edges(spec.n, rows, cols, directed=False)
    return SynthResult(
        sequence=SnapshotSequence(snapshots=tuple(snapshots)),
        labels=tuple(labels),
        active_nodes=active,
        next_snapshot=truth,
    )
