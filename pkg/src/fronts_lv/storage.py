"""On-disk formats: time-series CSV, snapshot CSVs, JSON reports."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .fbm_solver import RECORD_FIELDS, Trajectory
from .model import ModelParams

HEADER = ",".join(RECORD_FIELDS)
SNAPSHOT_HEADER = "x,u,v"


def fmt(value) -> str:
    """17 significant digits, C-locale style (Python formatting ignores the process locale)."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def write_rows(path, header: str, columns) -> None:
    lines = [header]
    for row in zip(*columns):
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_timeseries(path, records: dict) -> None:
    write_rows(path, HEADER, [records[name] for name in RECORD_FIELDS])


def read_columns(path, expected_header: str | None = None) -> dict:
    text = Path(path).read_text().splitlines()
    if not text:
        raise ValueError(f"{path}: empty file")
    header = text[0].strip()
    if expected_header is not None and header != expected_header:
        raise ValueError(f"{path}: header {header!r} does not match {expected_header!r}")
    names = header.split(",")
    rows = [line.split(",") for line in text[1:] if line.strip()]
    for i, row in enumerate(rows):
        if len(row) != len(names):
            raise ValueError(f"{path}: line {i + 2} has {len(row)} fields, expected {len(names)}")
    try:
        data = np.array(rows, dtype=float).reshape(len(rows), len(names))
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric entry ({exc})") from None
    return {name: data[:, j].copy() for j, name in enumerate(names)}


def read_timeseries(path) -> dict:
    return read_columns(path, HEADER)


def write_snapshots(directory, snapshots) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    index = ["index,t,file"]
    for i, snap in enumerate(snapshots):
        name = f"snapshot_{i:05d}.csv"
        write_rows(directory / name, SNAPSHOT_HEADER, (snap.x, snap.u, snap.v))
        index.append(f"{i},{fmt(snap.t)},{name}")
    (directory / "index.csv").write_text("\n".join(index) + "\n")


def read_snapshots(directory):
    from .fbm_solver import Snapshot

    directory = Path(directory)
    lines = (directory / "index.csv").read_text().splitlines()[1:]
    out = []
    for line in lines:
        _, t, name = line.split(",")
        cols = read_columns(directory / name, SNAPSHOT_HEADER)
        out.append(Snapshot(float(t), cols["x"], cols["u"], cols["v"]))
    return out


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(obj, str):  # str enums
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def trajectory_from_dir(directory, params: ModelParams) -> Trajectory:
    directory = Path(directory)
    traj = Trajectory(params=params, records=read_timeseries(directory / "timeseries.csv"))
    snap_dir = directory / "snapshots"
    if (snap_dir / "index.csv").exists():
        traj.snapshots = read_snapshots(snap_dir)
    return traj
