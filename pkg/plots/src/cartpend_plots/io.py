"""Readers for the cartpend CLI file formats, with schema validation."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = ("t", "x1", "x2", "x3", "x4", "u", "y1", "y2")
SUMMARY_KEYS = {"config", "system", "gains", "metrics", "residuals"}
SWEEP_ROW_KEYS = {"T", "peak_y1", "overshoot_y1", "settling_time", "stable"}

__all__ = ["SchemaError", "read_trajectory", "read_sweep", "TRAJECTORY_COLUMNS"]


class SchemaError(ValueError):
    """Input file does not follow the cartpend CLI schema."""


def read_trajectory(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a trajectory CSV into one array per column.

    The header must be exactly ``t,x1,x2,x3,x4,u,y1,y2`` and every row must
    hold eight floats.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"trajectory file not found: {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split(",")) != TRAJECTORY_COLUMNS:
        raise SchemaError(f"{path}: bad header, expected {','.join(TRAJECTORY_COLUMNS)}")
    if len(lines) < 2:
        raise SchemaError(f"{path}: no data rows")
    try:
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric row: {exc}") from exc
    if data.shape[1] != len(TRAJECTORY_COLUMNS):
        raise SchemaError(f"{path}: rows must have {len(TRAJECTORY_COLUMNS)} fields")
    return {name: data[:, i] for i, name in enumerate(TRAJECTORY_COLUMNS)}


def read_sweep(path: str | Path) -> dict:
    """Parse a sweep summary JSON.

    Returns ``{"config": ..., "redesign": bool, "rows": [...]}`` where rows
    carry T, peak_y1, overshoot_y1, settling_time, stable.  Settling times
    serialized as null come back as ``inf``.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"sweep file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or not SUMMARY_KEYS <= set(payload):
        raise SchemaError(f"{path}: summary must carry keys {sorted(SUMMARY_KEYS)}")
    metrics = payload.get("metrics") or {}
    table = metrics.get("sweep")
    if not isinstance(table, list) or not table:
        raise SchemaError(f"{path}: metrics.sweep must be a non-empty list")
    rows = []
    for row in table:
        if not isinstance(row, dict) or not SWEEP_ROW_KEYS <= set(row):
            raise SchemaError(f"{path}: sweep rows need keys {sorted(SWEEP_ROW_KEYS)}")
        settling = row["settling_time"]
        rows.append(
            {
                "T": float(row["T"]),
                "peak_y1": float(row["peak_y1"]),
                "overshoot_y1": float(row["overshoot_y1"]),
                "settling_time": np.inf if settling is None else float(settling),
                "stable": bool(row["stable"]),
            }
        )
    return {
        "config": payload["config"],
        "redesign": bool(metrics.get("redesign", False)),
        "rows": rows,
    }
