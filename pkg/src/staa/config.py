"""Pipeline hyperparameters and the flat ``key = value`` config file format."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import ConfigError

# Sparsification threshold search window used on the public datasets.
RHO_SEARCH_RANGE = (0.0001, 0.01)


@dataclass(frozen=True)
class StaaConfig:
    """Every knob of the augmentation pipeline.

    alpha        restart probability of the walk, in (0, 1).
    delta        scaling factor applied to the gated activity score, in (0, 2].
    gamma        gate between temporal change rate and spatial content, in (0, 1).
    window       time window (snapshot count) for the change rate, integer in [1, 10].
    decay        exponential decay of the frequency-band weights (default 1).
    num_scales   size of the wavelet scale ladder (default 6, at least 2).
    epsilon      guard added to standard deviations before dividing (default 1e-8).
    rho          sparsification threshold; entries below it are dropped on emission.
    kernel_knots band-pass kernel knots (rise ends, decay starts).
    binarize     replace every edge weight with 1 before any computation.
    solver       "direct" (factorize once, reuse) or "fixed_point".
    solver_tol   convergence tolerance of the fixed-point solver.
    disable_temporal  force all activity coefficients to 0 (pure per-snapshot walk).
    sparsify_carry    carry the thresholded matrix through the recursion instead of
                      the exact one (memory-constrained runs).
    symmetrize_output emit max(X, X^T) instead of the raw column-oriented matrix.
    """

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

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0.0 < self.delta <= 2.0:
            raise ConfigError(f"delta must be in (0, 2], got {self.delta}")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma must be in (0, 1), got {self.gamma}")
        if not (isinstance(self.window, int) and 1 <= self.window <= 10):
            raise ConfigError(f"window must be an integer in [1, 10], got {self.window}")
        if self.decay <= 0.0:
            raise ConfigError(f"decay must be positive, got {self.decay}")
        if not (isinstance(self.num_scales, int) and self.num_scales >= 2):
            raise ConfigError(f"num_scales must be an integer >= 2, got {self.num_scales}")
        if self.epsilon <= 0.0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        # rho accepts 0 so the un-thresholded matrix can be emitted; the search
        # window on real data is RHO_SEARCH_RANGE.
        if self.rho < 0.0:
            raise ConfigError(f"rho must be >= 0, got {self.rho}")
        k0, k1 = self.kernel_knots
        if not 0.0 < k0 < k1:
            raise ConfigError(f"kernel_knots must satisfy 0 < low < high, got {self.kernel_knots}")
        if self.solver not in ("direct", "fixed_point"):
            raise ConfigError(f"solver must be 'direct' or 'fixed_point', got {self.solver!r}")
        if self.solver_tol <= 0.0:
            raise ConfigError(f"solver_tol must be positive, got {self.solver_tol}")

    def with_overrides(self, **kwargs) -> "StaaConfig":
        """Return a copy with the given fields replaced (None values ignored)."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **updates) if updates else self


_BOOL_FIELDS = {"binarize", "disable_temporal", "sparsify_carry", "symmetrize_output"}
_INT_FIELDS = {"window", "num_scales"}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def parse_config_text(text: str) -> StaaConfig:
    """Parse ``key = value`` lines into a config; unknown keys are rejected."""
    known = {f.name for f in fields(StaaConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in known:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        if key in _BOOL_FIELDS:
            values[key] = _parse_bool(val)
        elif key in _INT_FIELDS:
            values[key] = int(val)
        elif key == "kernel_knots":
            parts = [p for p in val.replace(",", " ").split() if p]
            if len(parts) != 2:
                raise ConfigError(f"config line {lineno}: kernel_knots needs two values")
            values[key] = (float(parts[0]), float(parts[1]))
        elif key == "solver":
            values[key] = val
        else:
            values[key] = float(val)
    return StaaConfig(**values)


def load_config(path) -> StaaConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def config_to_text(cfg: StaaConfig) -> str:
    lines = []
    for f in fields(StaaConfig):
        value = getattr(cfg, f.name)
        if f.name == "kernel_knots":
            value = f"{value[0]:.12g},{value[1]:.12g}"
        elif isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = f"{value:.12g}"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def worker_count() -> int:
    """Worker cap for parallel per-snapshot stages; STAA_THREADS overrides."""
    env = os.environ.get("STAA_THREADS", "").strip()
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError(f"STAA_THREADS must be an integer, got {env!r}") from None
        return max(1, cap)
    return max(1, min(8, os.cpu_count() or 1))
