"""Binary checkpoints and the diagnostics CSV.

Checkpoint layout, all little-endian::

    b"G3W2"  u32 version=1  u32 n
    f64 L  f64 t  f64 nu  f64 alpha1  f64 beta  f64 epsilon  f64 T
    n*n f64 vorticity samples, row-major (first index is x1)

``alpha2`` is not stored; it never enters the 2D dynamics.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from .diagnostics import EnergySnapshot
from .dynamics import FluidParams, SimState
from .grid import GridSpec, ScalarField
from .oseen import ScalingFrame

__all__ = [
    "CheckpointError",
    "write_checkpoint",
    "read_checkpoint",
    "CSV_COLUMNS",
    "snapshot_row",
    "write_csv",
    "read_csv",
]

MAGIC = b"G3W2"
VERSION = 1
_HEADER = struct.Struct("<4sII7d")

CSV_COLUMNS = ("tau", "t", "eta", "E1", "E2", "E3", "E4", "E5", "E6", "E7",
               "theorem_lhs", "l1_err", "l2_err", "velocity_lq_err")


class CheckpointError(ValueError):
    pass


def write_checkpoint(path, state: SimState) -> None:
    g, p = state.grid, state.params
    head = _HEADER.pack(MAGIC, VERSION, g.n, g.length, state.t, p.nu, p.alpha1, p.beta,
                        p.epsilon, state.frame.T)
    body = np.ascontiguousarray(state.w.values, dtype="<f8").tobytes()
    Path(path).write_bytes(head + body)


def read_checkpoint(path) -> SimState:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CheckpointError(f"{path}: truncated header")
    magic, version, n, L, t, nu, a1, beta, eps, T = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 8 * n * n
    if len(data) != expected:
        raise CheckpointError(f"{path}: size {len(data)} does not match n={n} ({expected} bytes)")
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape(n, n)
    params = FluidParams(nu=nu, alpha1=a1, beta=beta, epsilon=eps)
    return SimState(ScalarField(GridSpec(n, L), values), t, params, ScalingFrame(T))


def snapshot_row(snap: EnergySnapshot) -> list[float]:
    lp = snap.lp_errors
    values = [snap.tau, snap.t, snap.eta, snap.E1, snap.E2, snap.E3, snap.E4, snap.E5, snap.E6,
              snap.E7, snap.theorem_lhs, lp.get("l1", np.nan), lp.get("l2", np.nan),
              lp.get("velocity_lq", np.nan)]
    return [float(v) for v in values]


def write_csv(path, snapshots) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_COLUMNS)
        for snap in snapshots:
            out.writerow([format(v, ".17g") for v in snapshot_row(snap)])


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns of a diagnostics CSV keyed by header name."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header = rows[0]
    missing = {"tau", "theorem_lhs"} - set(header)
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
