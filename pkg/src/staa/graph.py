"""Snapshot data model and the matrix derivations everything else consumes.

A snapshot is an n x n nonnegative weighted adjacency matrix in CSR form,
canonicalized on construction (duplicates summed, indices sorted, explicit
zeros dropped). Snapshots are treated as immutable; all operations return
new objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ZeroRowError

# A degree vector is a plain length-n float array (out-degree, weighted).
DegreeVector = np.ndarray


def _canonical(matrix) -> sp.csr_array:
    m = sp.coo_array(matrix)
    m.sum_duplicates()
    m = m.tocsr()
    m.eliminate_zeros()
    m.sort_indices()
    return m.astype(np.float64)


@dataclass(frozen=True)
class Snapshot:
    """One timestep of a dynamic graph over a fixed node set."""

    matrix: sp.csr_array
    directed: bool = False
    features: np.ndarray | None = None  # optional pass-through payload

    def __post_init__(self) -> None:
        m = _canonical(self.matrix)
        rows, cols = m.shape
        if rows != cols or rows < 1:
            raise ValueError(f"snapshot matrix must be square with n >= 1, got {m.shape}")
        if m.nnz and m.data.min() < 0:
            raise ValueError("snapshot weights must be nonnegative")
        if not self.directed and (m != m.T).nnz != 0:
            raise ValueError("undirected snapshot must have an exactly symmetric matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    @classmethod
    def from_edges(cls, n, rows, cols, weights=None, directed=False, features=None) -> "Snapshot":
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if weights is None:
            weights = np.ones(len(rows), dtype=np.float64)
        weights = np.asarray(weights, dtype=np.float64)
        m = sp.coo_array((weights, (rows, cols)), shape=(n, n))
        return cls(matrix=m, directed=directed, features=features)

    @classmethod
    def from_dense(cls, dense, directed=False) -> "Snapshot":
        return cls(matrix=sp.csr_array(np.asarray(dense, dtype=np.float64)), directed=directed)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def replace_matrix(self, matrix, directed=None) -> "Snapshot":
        return Snapshot(
            matrix=matrix,
            directed=self.directed if directed is None else directed,
            features=self.features,
        )


@dataclass(frozen=True)
class SnapshotSequence:
    """Ordered snapshots over a shared node set with strictly increasing labels."""

    snapshots: tuple[Snapshot, ...]
    timestamps: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        snaps = tuple(self.snapshots)
        if len(snaps) < 1:
            raise ValueError("sequence needs at least one snapshot")
        n = snaps[0].n
        if any(s.n != n for s in snaps):
            raise ValueError("all snapshots must share the same node count")
        ts = tuple(self.timestamps) if self.timestamps else tuple(range(1, len(snaps) + 1))
        if len(ts) != len(snaps):
            raise ValueError("timestamps must match the number of snapshots")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("timestamps must be strictly increasing")
        object.__setattr__(self, "snapshots", snaps)
        object.__setattr__(self, "timestamps", ts)

    @property
    def n(self) -> int:
        return self.snapshots[0].n

    @property
    def num_snapshots(self) -> int:
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __len__(self) -> int:
        return len(self.snapshots)


def with_self_loops(s: Snapshot) -> Snapshot:
    """Raise every diagonal entry to at least 1; off-diagonal untouched. Idempotent."""
    diag = s.matrix.diagonal()
    target = np.maximum(diag, 1.0)
    bump = sp.diags_array(target - diag, format="csr")
    return s.replace_matrix(s.matrix + bump)


def strip_self_loops(s: Snapshot) -> Snapshot:
    """Drop all diagonal entries."""
    diag = s.matrix.diagonal()
    if not diag.any():
        return s
    return s.replace_matrix(s.matrix - sp.diags_array(diag, format="csr"))


def degree_vector(s: Snapshot) -> DegreeVector:
    """Weighted out-degree: row sums of the adjacency matrix."""
    return np.asarray(s.matrix.sum(axis=1)).reshape(-1)


def row_normalize(s: Snapshot) -> Snapshot:
    """Scale every row to sum 1; requires self-loops so no row sum is zero."""
    sums = degree_vector(s)
    if np.any(sums == 0.0):
        bad = int(np.flatnonzero(sums == 0.0)[0])
        raise ZeroRowError(f"row {bad} sums to 0; add self-loops before normalizing")
    inv = sp.diags_array(1.0 / sums, format="csr")
    return s.replace_matrix(inv @ s.matrix, directed=True)


def symmetrized(s: Snapshot) -> Snapshot:
    """Element-wise max(A, A^T); already-symmetric input is unchanged."""
    m = s.matrix.maximum(s.matrix.T)
    return s.replace_matrix(m, directed=False)


def binarized(s: Snapshot) -> Snapshot:
    """Replace every stored weight with 1."""
    m = s.matrix.copy()
    m.data = np.ones_like(m.data)
    return s.replace_matrix(m)


def laplacian(s: Snapshot) -> np.ndarray:
    """Combinatorial Laplacian D - A as a dense symmetric matrix.

    Directed input is symmetrized first; self-loops are dropped (they are a
    walk construct and would cancel inconsistently in D - A).
    """
    base = strip_self_loops(s)
    if base.directed:
        base = symmetrized(base)
    a = base.to_dense()
    return np.diag(a.sum(axis=1)) - a
