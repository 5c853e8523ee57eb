"""Reference augmenters to compare the diffusion against.

none      leave every adjacency matrix untouched
merge     running element-wise max (or sum) of all matrices up to t
dropedge  remove each edge independently with a fixed probability and seed
ppr       per-snapshot restart-walk diffusion (the temporal term zeroed)
staa      the full activity-aware diffusion
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
import scipy.sparse as sp

from .config import StaaConfig
from .diffusion import DiffusionMatrix, assemble_walk, diffuse_sequence, solve_direct, sparsify
from .graph import SnapshotSequence


@dataclass(frozen=True)
class NoAugment:
    name = "none"


@dataclass(frozen=True)
class MergeAugment:
    name = "merge"
    mode: str = "max"  # "max" unions weights, "sum" accumulates them

    def __post_init__(self) -> None:
        if self.mode not in ("max", "sum"):
            raise ValueError(f"merge mode must be 'max' or 'sum', got {self.mode!r}")


@dataclass(frozen=True)
class DropEdgeAugment:
    name = "dropedge"
    rate: float = 0.1
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.rate < 1.0:
            raise ValueError(f"drop rate must be in [0, 1), got {self.rate}")


@dataclass(frozen=True)
class PprAugment:
    name = "ppr"
    alpha: float = 0.2
    rho: float = 0.001

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.rho < 0.0:
            raise ValueError(f"rho must be >= 0, got {self.rho}")


@dataclass(frozen=True)
class StaaAugment:
    name = "staa"
    config: StaaConfig = field(default_factory=StaaConfig)


AugmenterKind = Union[NoAugment, MergeAugment, DropEdgeAugment, PprAugment, StaaAugment]

METHOD_NAMES = ("none", "merge", "dropedge", "ppr", "staa")


def make_augmenter(
    method: str,
    *,
    rate: float | None = None,
    seed: int | None = None,
    alpha: float | None = None,
    rho: float | None = None,
    merge_mode: str | None = None,
    config: StaaConfig | None = None,
) -> AugmenterKind:
    """Build an augmenter from a method name, filling gaps from the config."""
    cfg = config or StaaConfig()
    if method == "none":
        return NoAugment()
    if method == "merge":
        return MergeAugment(mode=merge_mode or "max")
    if method == "dropedge":
        return DropEdgeAugment(rate=0.1 if rate is None else rate, seed=seed or 0)
    if method == "ppr":
        return PprAugment(alpha=cfg.alpha if alpha is None else alpha,
                          rho=cfg.rho if rho is None else rho)
    if method == "staa":
        return StaaAugment(config=cfg)
    raise ValueError(f"unknown method {method!r}; expected one of {METHOD_NAMES}")


def _drop_edges(matrix: sp.csr_array, rate: float, rng: np.random.Generator,
                undirected: bool) -> sp.csr_array:
    coo = matrix.tocoo()
    if coo.nnz == 0 or rate == 0.0:
        return matrix.copy()
    if undirected:
        # decide once per unordered pair so mirrored entries drop together
        upper = coo.row <= coo.col
        keep_pair = rng.random(int(upper.sum())) >= rate
        decision = {}
        for (u, v), keep in zip(zip(coo.row[upper], coo.col[upper]), keep_pair):
            decision[(int(u), int(v))] = keep
        mask = np.array(
            [decision[(min(u, v), max(u, v))] for u, v in zip(coo.row, coo.col)]
        )
    else:
        mask = rng.random(coo.nnz) >= rate
    kept = sp.coo_array(
        (coo.data[mask], (coo.row[mask], coo.col[mask])), shape=matrix.shape
    )
    return kept.tocsr()


def augment(seq: SnapshotSequence, kind: AugmenterKind) -> list[sp.csr_array]:
    """Produce one augmented adjacency matrix per timestep."""
    if isinstance(kind, NoAugment):
        return [s.matrix.copy() for s in seq.snapshots]

    if isinstance(kind, MergeAugment):
        out: list[sp.csr_array] = []
        running = None
        for s in seq.snapshots:
            if running is None:
                running = s.matrix.copy()
            elif kind.mode == "max":
                running = running.maximum(s.matrix).tocsr()
            else:
                running = (running + s.matrix).tocsr()
            out.append(running.copy())
        return out

    if isinstance(kind, DropEdgeAugment):
        rng = np.random.default_rng(kind.seed)
        return [
            _drop_edges(s.matrix, kind.rate, rng, undirected=not s.directed)
            for s in seq.snapshots
        ]

    if isinstance(kind, PprAugment):
        out = []
        identity = DiffusionMatrix.identity(seq.n)
        for s in seq.snapshots:
            op = assemble_walk(s, np.zeros(seq.n), kind.alpha)
            solved = solve_direct(op, identity)
            out.append(sparsify(solved, kind.rho).matrix)
        return out

    if isinstance(kind, StaaAugment):
        return [d.matrix for d in diffuse_sequence(seq, kind.config)]

    raise TypeError(f"unknown augmenter kind: {kind!r}")
