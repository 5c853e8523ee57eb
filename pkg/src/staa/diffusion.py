"""Activity-aware random-walk diffusion over a snapshot sequence.

Per timestep the walker either moves on the current snapshot (probability
1 - alpha - beta_u), restarts at its seed (alpha), or keeps the mass it had
one snapshot earlier (beta_u, the per-node activity coefficient). Columns of
the diffusion matrix are stationary visit distributions, one per seed. The
closed-form solve factorizes the system matrix once per timestep and reuses
it across all n seed columns; the fixed-point iteration is retained as an
independent route to the same answer.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .activity import build_activity
from .config import StaaConfig
from .errors import InvalidBetaError, MaxItersError, SingularSystemError, StaaError
from .graph import Snapshot, SnapshotSequence, binarized, row_normalize, with_self_loops

RESIDUAL_TOL = 1e-8
BETA_SLACK = 1e-12


@dataclass(frozen=True)
class WalkOperator:
    """Transition structure of one timestep: transpose of the row-normalized
    self-looped adjacency, the restart probability, and the per-node
    activity coefficients."""

    transition_t: sp.csr_array  # columns sum to 1
    alpha: float
    beta: np.ndarray

    @property
    def n(self) -> int:
        return self.beta.shape[0]

    def move_probabilities(self) -> np.ndarray:
        return 1.0 - self.alpha - self.beta


@dataclass(frozen=True)
class DiffusionMatrix:
    """Column-indexed visit probabilities at one timestep: entry (v, s) is the
    stationary probability of visiting v from seed s."""

    t: int
    matrix: sp.csr_array
    rho_applied: bool = False

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    @classmethod
    def identity(cls, n: int) -> "DiffusionMatrix":
        return cls(t=0, matrix=sp.eye_array(n, format="csr"))


def assemble_walk(snapshot: Snapshot, beta: np.ndarray, alpha: float) -> WalkOperator:
    """Build the walk operator on the self-looped, row-normalized snapshot.

    Directed snapshots keep their direction here; only the spectral stage
    symmetrizes. beta must already be clamped into [0, 1 - alpha].
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    beta = np.asarray(beta, dtype=np.float64).reshape(-1)
    if beta.shape[0] != snapshot.n:
        raise ValueError(f"beta length {beta.shape[0]} does not match n={snapshot.n}")
    if np.any(beta < -BETA_SLACK):
        raise InvalidBetaError(f"negative activity coefficient: {beta.min()}")
    excess = beta - (1.0 - alpha)
    if np.any(excess > BETA_SLACK):
        bad = int(np.argmax(excess))
        raise InvalidBetaError(
            f"beta[{bad}]={beta[bad]} exceeds the walk budget 1-alpha={1.0 - alpha}"
        )
    beta = np.clip(beta, 0.0, 1.0 - alpha)
    normalized = row_normalize(with_self_loops(snapshot))
    return WalkOperator(transition_t=normalized.matrix.T.tocsr(), alpha=alpha, beta=beta)


def _system_matrix(op: WalkOperator) -> np.ndarray:
    move = sp.diags_array(op.move_probabilities(), format="csr")
    return np.eye(op.n) - (op.transition_t @ move).toarray()


def _injection(op: WalkOperator, prev: DiffusionMatrix) -> np.ndarray:
    rhs = op.beta[:, None] * prev.to_dense()
    rhs[np.diag_indices(op.n)] += op.alpha
    return rhs


def solve_direct(op: WalkOperator, prev: DiffusionMatrix) -> DiffusionMatrix:
    """Closed-form solve: one LU factorization shared across all seed columns."""
    system = _system_matrix(op)
    rhs = _injection(op, prev)
    try:
        lu, piv = scipy.linalg.lu_factor(system)
        solution = scipy.linalg.lu_solve((lu, piv), rhs)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(f"walk system could not be factorized: {exc}") from exc
    residual = np.max(np.abs(system @ solution - rhs))
    if not np.isfinite(residual) or residual > RESIDUAL_TOL:
        raise SingularSystemError(f"solve residual {residual} exceeds {RESIDUAL_TOL}")
    return DiffusionMatrix(t=prev.t + 1, matrix=sp.csr_array(solution))


def solve_fixed_point(
    op: WalkOperator, prev: DiffusionMatrix, tol: float = 1e-10, max_iters: int = 100_000
) -> DiffusionMatrix:
    """Iterate the stationary equation from the identity until the update
    falls below tol in max-norm; geometric convergence with ratio <= 1 - alpha."""
    step = op.transition_t @ sp.diags_array(op.move_probabilities(), format="csr")
    injection = _injection(op, prev)
    current = np.eye(op.n)
    for _ in range(max_iters):
        updated = step @ current + injection
        delta = np.max(np.abs(updated - current))
        current = updated
        if delta <= tol:
            return DiffusionMatrix(t=prev.t + 1, matrix=sp.csr_array(current))
    raise MaxItersError(f"no convergence to {tol} within {max_iters} iterations")


def sparsify(x: DiffusionMatrix, rho: float) -> DiffusionMatrix:
    """Drop entries strictly below rho; survivors are kept as-is (no
    renormalization). Idempotent."""
    if rho < 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    m = x.matrix.copy()
    m.data[m.data < rho] = 0.0
    m.eliminate_zeros()
    return DiffusionMatrix(t=x.t, matrix=m, rho_applied=True)


def _symmetrize(x: DiffusionMatrix) -> DiffusionMatrix:
    return replace(x, matrix=x.matrix.maximum(x.matrix.T).tocsr())


def diffuse_with_betas(
    seq: SnapshotSequence, betas: np.ndarray, cfg: StaaConfig
) -> list[DiffusionMatrix]:
    """Run the diffusion recursion with externally supplied coefficients.

    Emits one rho-sparsified matrix per timestep. The recursion carries the
    exact (un-thresholded) matrix unless cfg.sparsify_carry is set.
    """
    betas = np.asarray(betas, dtype=np.float64)
    if betas.shape != (seq.num_snapshots, seq.n):
        raise ValueError(f"betas must have shape (T, n)={(seq.num_snapshots, seq.n)}, got {betas.shape}")
    solver = solve_direct if cfg.solver == "direct" else _fixed_point_with(cfg)
    previous = DiffusionMatrix.identity(seq.n)
    emitted: list[DiffusionMatrix] = []
    for index, snapshot in enumerate(seq.snapshots):
        if cfg.binarize:
            snapshot = binarized(snapshot)
        try:
            op = assemble_walk(snapshot, betas[index], cfg.alpha)
            solved = solver(op, previous)
        except StaaError as exc:
            raise type(exc)(f"timestep {seq.timestamps[index]}: {exc}") from exc
        thresholded = sparsify(solved, cfg.rho)
        emitted.append(_symmetrize(thresholded) if cfg.symmetrize_output else thresholded)
        previous = thresholded if cfg.sparsify_carry else solved
    return emitted


def _fixed_point_with(cfg: StaaConfig):
    def solver(op: WalkOperator, prev: DiffusionMatrix) -> DiffusionMatrix:
        return solve_fixed_point(op, prev, tol=cfg.solver_tol)

    return solver


def diffuse_sequence(seq: SnapshotSequence, cfg: StaaConfig) -> list[DiffusionMatrix]:
    """Full pipeline: score activity per node and timestep, then diffuse.

    With cfg.disable_temporal all coefficients are forced to 0 and each
    timestep reduces to an independent restart-walk diffusion.
    """
    if cfg.disable_temporal:
        betas = np.zeros((seq.num_snapshots, seq.n))
    else:
        betas = build_activity(seq, cfg).beta
    return diffuse_with_betas(seq, betas, cfg)
