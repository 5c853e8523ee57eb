"""Pydantic request/response models for the HTTP surface.

Sparse matrices travel as parallel (rows, cols, values) arrays; sequences
carry their snapshot timestamps. Every model converts to and from the core
package types.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, Field

from ..config import StaaConfig
from ..graph import Snapshot, SnapshotSequence
from ..synth import SynthSpec


class SnapshotModel(BaseModel):
    n: int
    rows: list[int] = Field(default_factory=list)
    cols: list[int] = Field(default_factory=list)
    values: list[float] = Field(default_factory=list)
    directed: bool = False

    @classmethod
    def from_snapshot(cls, s: Snapshot) -> "SnapshotModel":
        coo = s.matrix.tocoo()
        return cls(
            n=s.n,
            rows=[int(r) for r in coo.row],
            cols=[int(c) for c in coo.col],
            values=[float(v) for v in coo.data],
            directed=s.directed,
        )

    def to_snapshot(self) -> Snapshot:
        return Snapshot.from_edges(self.n, self.rows, self.cols, self.values, directed=self.directed)


class SequenceModel(BaseModel):
    snapshots: list[SnapshotModel]
    timestamps: list[int] = Field(default_factory=list)

    @classmethod
    def from_sequence(cls, seq: SnapshotSequence) -> "SequenceModel":
        return cls(
            snapshots=[SnapshotModel.from_snapshot(s) for s in seq.snapshots],
            timestamps=list(seq.timestamps),
        )

    def to_sequence(self) -> SnapshotSequence:
        return SnapshotSequence(
            snapshots=tuple(s.to_snapshot() for s in self.snapshots),
            timestamps=tuple(self.timestamps),
        )


class ConfigModel(BaseModel):
    alpha: float = 0.2
    delta: float = 1.0
    gamma: float = 0.5
    window: int = 3
    decay: float = 1.0
    num_scales: int = 6
    epsilon: float = 1e-8
    rho: float = 0.001
    kernel_knots: tuple[float, float] = (1.0, 2.0)
    binarize: bool = False
    solver: str = "direct"
    solver_tol: float = 1e-10
    disable_temporal: bool = False
    sparsify_carry: bool = False
    symmetrize_output: bool = False

    @classmethod
    def from_config(cls, cfg: StaaConfig) -> "ConfigModel":
        return cls(**{name: getattr(cfg, name) for name in cls.model_fields})

    def to_config(self) -> StaaConfig:
        return StaaConfig(**self.model_dump())


class MatrixModel(BaseModel):
    t: int
    n: int
    rows: list[int] = Field(default_factory=list)
    cols: list[int] = Field(default_factory=list)
    values: list[float] = Field(default_factory=list)
    rho_applied: bool = False

    @classmethod
    def from_matrix(cls, t: int, matrix, rho_applied: bool = False) -> "MatrixModel":
        coo = sp.coo_array(matrix)
        order = np.lexsort((coo.row, coo.col))
        return cls(
            t=t,
            n=matrix.shape[0],
            rows=[int(coo.row[i]) for i in order],
            cols=[int(coo.col[i]) for i in order],
            values=[float(coo.data[i]) for i in order],
            rho_applied=rho_applied,
        )

    def to_matrix(self) -> sp.csr_array:
        return sp.coo_array(
            (self.values, (self.rows, self.cols)), shape=(self.n, self.n)
        ).tocsr()


class LabelModel(BaseModel):
    t: int
    u: int
    v: int
    label: str


class HealthResponse(BaseModel):
    status: str
    version: str


class DiffuseRequest(BaseModel):
    sequence: SequenceModel
    config: ConfigModel = Field(default_factory=ConfigModel)


class MatricesResponse(BaseModel):
    matrices: list[MatrixModel]


class ActivityRequest(BaseModel):
    sequence: SequenceModel
    config: ConfigModel = Field(default_factory=ConfigModel)


class ActivityRow(BaseModel):
    t: int
    node: int
    a: float
    b: float
    delta_a: float
    delta_a_norm: float
    b_norm: float
    tau: float
    tau_norm: float
    beta: float


class ActivityResponse(BaseModel):
    rows: list[ActivityRow]


class AugmentRequest(BaseModel):
    sequence: SequenceModel
    method: str
    config: ConfigModel = Field(default_factory=ConfigModel)
    rate: float | None = None
    seed: int | None = None
    alpha: float | None = None
    rho: float | None = None
    merge_mode: str | None = None


class SynthRequest(BaseModel):
    n: int = 100
    communities: int = 4
    snapshots: int = 8
    p_in: float = 0.1
    p_out: float = 0.005
    active_fraction: float = 0.2
    noise_rate: float = 0.1
    churn_rate: float = 0.0
    seed: int = 0

    def to_spec(self) -> SynthSpec:
        return SynthSpec(**self.model_dump())


class SynthResponse(BaseModel):
    sequence: SequenceModel
    labels: list[LabelModel]
    active_nodes: list[int]
    next_snapshot: SnapshotModel


class EvalRequest(BaseModel):
    matrices: list[MatrixModel]
    truth: SnapshotModel
    labels: list[LabelModel] | None = None
    seed: int = 0
    augmenter: str = "unknown"


class EvalRow(BaseModel):
    """Report row; non-finite statistics travel as null (JSON has no NaN)."""

    augmenter: str
    t: int
    auc: float | None = None
    noise_mean: float | None = None
    persistent_mean: float | None = None
    suppression_ratio: float | None = None


class EvalResponse(BaseModel):
    rows: list[EvalRow]


class CompareRequest(BaseModel):
    sequence: SequenceModel
    methods: list[str]
    truth: SnapshotModel
    labels: list[LabelModel] | None = None
    config: ConfigModel = Field(default_factory=ConfigModel)
    seed: int = 0
    rate: float | None = None


class CompareResponse(BaseModel):
    rows: list[EvalRow]
