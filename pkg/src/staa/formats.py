"""File formats and snapshot partitioning.

Input edge streams are whitespace- or comma-separated lines ``u v [w] ts``
with ``#`` comments; node ids are remapped to dense indices 0..n-1 (sorted
by original id) and the mapping is written next to every output. All
numeric output uses 12 significant digits and every file write is atomic
(temp file + rename).
"""

from __future__ import annotations

import hashlib
import os
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import EmptyStreamError, NegativeTimestampError, ParseError
from .graph import Snapshot, SnapshotSequence

MATRIX_FILE_PATTERN = "x_t{t:04d}.txt"
NODES_MAP_NAME = "nodes.map"
MANIFEST_NAME = "manifest.txt"
EDGES_NAME = "edges.txt"
LABELS_NAME = "labels.txt"
NEXT_SNAPSHOT_NAME = "next.txt"
ACTIVE_NODES_NAME = "active.txt"


def fmt(value: float) -> str:
    """Canonical 12-significant-digit rendering."""
    return f"{value:.12g}"


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class EdgeStreamRecord:
    u: int
    v: int
    w: float
    ts: int


def _parse_line(parts: list[str], lineno: int) -> EdgeStreamRecord:
    try:
        if len(parts) == 3:
            u, v, ts = int(parts[0]), int(parts[1]), int(parts[2])
            w = 1.0
        elif len(parts) == 4:
            u, v, w, ts = int(parts[0]), int(parts[1]), float(parts[2]), int(parts[3])
        else:
            raise ValueError(f"expected 3 or 4 columns, got {len(parts)}")
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None
    if u < 0 or v < 0:
        raise ParseError(f"line {lineno}: node ids must be >= 0")
    if ts < 0:
        raise NegativeTimestampError(f"line {lineno}: negative timestamp {ts}")
    if w < 0:
        raise ParseError(f"line {lineno}: negative weight {w}")
    return EdgeStreamRecord(u=u, v=v, w=w, ts=ts)


def parse_edge_stream(source) -> tuple[list[EdgeStreamRecord], dict[int, int]]:
    """Read records in file order and remap node ids densely (sorted by
    original id, so the mapping is independent of record order).

    Returns (records with dense ids, original_id -> dense_id map).
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        lines = list(source)
    raw: list[EdgeStreamRecord] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = [p for p in stripped.replace(",", " ").split() if p]
        raw.append(_parse_line(parts, lineno))
    ids = sorted({r.u for r in raw} | {r.v for r in raw})
    mapping = {original: dense for dense, original in enumerate(ids)}
    records = [EdgeStreamRecord(mapping[r.u], mapping[r.v], r.w, r.ts) for r in raw]
    return records, mapping


def partition_snapshots(
    records: list[EdgeStreamRecord],
    num_snapshots: int,
    n: int | None = None,
    undirected: bool = False,
    equal_count: bool = False,
) -> SnapshotSequence:
    """Split records into snapshots 1..T.

    Default is equal-width timestamp intervals (half-open, last closed), so
    assignment depends only on ts. With equal_count the records are sorted by
    (ts, u, v, w) and split into T near-equal chunks. Duplicate edges within a
    snapshot are summed; undirected input mirrors each record.
    """
    if num_snapshots < 1:
        raise ValueError(f"need at least 1 snapshot, got {num_snapshots}")
    if not records:
        raise EmptyStreamError("no records to partition")
    if n is None:
        n = max(max(r.u, r.v) for r in records) + 1

    assignment: list[list[EdgeStreamRecord]] = [[] for _ in range(num_snapshots)]
    if equal_count:
        ordered = sorted(records, key=lambda r: (r.ts, r.u, r.v, r.w))
        for chunk_index, chunk in enumerate(np.array_split(np.arange(len(ordered)), num_snapshots)):
            for i in chunk:
                assignment[chunk_index].append(ordered[int(i)])
    else:
        ts_values = [r.ts for r in records]
        lo, hi = min(ts_values), max(ts_values)
        width = (hi - lo) / num_snapshots
        for r in records:
            if width == 0.0:
                index = num_snapshots - 1
            else:
                index = min(int((r.ts - lo) / width), num_snapshots - 1)
            assignment[index].append(r)

    empty = [i + 1 for i, bucket in enumerate(assignment) if not bucket]
    if empty:
        warnings.warn(f"snapshots {empty} received no records", stacklevel=2)

    snapshots = []
    for bucket in assignment:
        rows = [r.u for r in bucket]
        cols = [r.v for r in bucket]
        weights = [r.w for r in bucket]
        if undirected:
            mirror = [(r.v, r.u, r.w) for r in bucket if r.u != r.v]
            rows += [m[0] for m in mirror]
            cols += [m[1] for m in mirror]
            weights += [m[2] for m in mirror]
        snapshots.append(
            Snapshot.from_edges(n, rows, cols, weights, directed=not undirected)
        )
    return SnapshotSequence(snapshots=tuple(snapshots))


def write_edge_stream(path, seq: SnapshotSequence) -> None:
    """Inverse of parse+partition for dense-id sequences: one line per stored
    entry (upper triangle only for undirected snapshots), ts = snapshot label."""
    lines = []
    for snapshot, t in zip(seq.snapshots, seq.timestamps):
        coo = snapshot.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for i in order:
            u, v, w = int(coo.row[i]), int(coo.col[i]), float(coo.data[i])
            if not snapshot.directed and u > v:
                continue
            lines.append(f"{u} {v} {fmt(w)} {t}")
    atomic_write(path, "\n".join(lines) + "\n" if lines else "")


def matrix_lines(t: int, matrix) -> list[str]:
    """Sparse text lines ``t row col value`` sorted by (t, col, row)."""
    coo = sp.coo_array(matrix)
    order = np.lexsort((coo.row, coo.col))
    return [
        f"{t} {int(coo.row[i])} {int(coo.col[i])} {fmt(float(coo.data[i]))}"
        for i in order
    ]


def write_matrix_file(path, t: int, matrix) -> None:
    lines = matrix_lines(t, matrix)
    atomic_write(path, "\n".join(lines) + "\n" if lines else "")


def read_matrix_dir(directory, n: int | None = None) -> dict[int, sp.csr_array]:
    """Load every x_t*.txt file in a directory into {t: csr matrix}."""
    directory = Path(directory)
    entries: dict[int, list[tuple[int, int, float]]] = {}
    max_index = -1
    for path in sorted(directory.glob("x_t*.txt")):
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                t_str, row, col, value = line.split()
                t, row, col = int(t_str), int(row), int(col)
                entries.setdefault(t, []).append((row, col, float(value)))
                max_index = max(max_index, row, col)
    if n is None:
        map_path = directory / NODES_MAP_NAME
        n = len(read_nodes_map(map_path)) if map_path.exists() else max_index + 1
    out = {}
    for t, triples in entries.items():
        rows = [e[0] for e in triples]
        cols = [e[1] for e in triples]
        values = [e[2] for e in triples]
        out[t] = sp.coo_array((values, (rows, cols)), shape=(n, n)).tocsr()
    return out


def write_nodes_map(path, mapping: dict[int, int]) -> None:
    lines = [f"{original} {dense}" for original, dense in sorted(mapping.items(), key=lambda kv: kv[1])]
    atomic_write(path, "\n".join(lines) + "\n" if lines else "")


def read_nodes_map(path) -> dict[int, int]:
    mapping = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            original, dense = line.split()
            mapping[int(original)] = int(dense)
    return mapping


def write_labels(path, labels) -> None:
    lines = [f"{t} {u} {v} {label}" for t, u, v, label in labels]
    atomic_write(path, "\n".join(lines) + "\n" if lines else "")


def read_labels(path) -> tuple[tuple[int, int, int, str], ...]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t, u, v, label = line.split()
            out.append((int(t), int(u), int(v), label))
    return tuple(out)


def stream_digest(records: list[EdgeStreamRecord]) -> str:
    """Hash of the canonicalized input: records sorted by every field."""
    canonical = sorted(records, key=lambda r: (r.ts, r.u, r.v, r.w))
    payload = "\n".join(f"{r.u} {r.v} {fmt(r.w)} {r.ts}" for r in canonical)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def write_manifest(path, entries: dict) -> None:
    lines = [f"{key} = {value}" for key, value in entries.items()]
    atomic_write(path, "\n".join(lines) + "\n")


def read_manifest(path) -> dict[str, str]:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or "=" not in line:
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out
