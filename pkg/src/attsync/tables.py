"""Delimited trajectory tables.

One row per recorded timestamp: t, the 3n state coordinates, then the
monitor channels.  Floats are serialized with repr, so a written table
parses back to bit-identical values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["TableFormatError", "TrajectoryTable", "table_header",
           "write_trajectory_csv", "read_trajectory_csv"]

_MONITOR_COLUMNS = ("v1", "v2", "max_norm", "disagreement")


class TableFormatError(ValueError):
    """A trajectory table file does not match the expected schema."""


@dataclass(frozen=True, eq=False)
class TrajectoryTable:
    """In-memory view of a trajectory table."""

    times: np.ndarray        # (k,)
    states: np.ndarray       # (k, n, 3)
    v1: np.ndarray
    v2: np.ndarray
    max_norm: np.ndarray
    disagreement: np.ndarray

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @classmethod
    def from_record(cls, record) -> "TrajectoryTable":
        return cls(record.times, record.states, record.v1, record.v2,
                   record.max_norm, record.disagreement)


def table_header(n: int) -> list[str]:
    cols = ["t"]
    for i in range(1, n + 1):
        cols.extend(f"x_{i}_{c}" for c in (1, 2, 3))
    cols.extend(_MONITOR_COLUMNS)
    return cols


def write_trajectory_csv(path, table: TrajectoryTable) -> Path:
    path = Path(path)
    rows = [",".join(table_header(table.n))]
    for k in range(table.times.size):
        values = [
            table.times[k],
            *table.states[k].ravel(),
            table.v1[k],
            table.v2[k],
            table.max_norm[k],
            table.disagreement[k],
        ]
        rows.append(",".join(repr(float(v)) for v in values))
    path.write_text("\n".join(rows) + "\n")
    return path


def read_trajectory_csv(path) -> TrajectoryTable:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise TableFormatError(f"{path.name}: empty file")
    header = lines[0].split(",")
    n3 = len(header) - 1 - len(_MONITOR_COLUMNS)
    if n3 <= 0 or n3 % 3 != 0 or header != table_header(n3 // 3):
        raise TableFormatError(f"{path.name}: header does not match the trajectory schema")
    body = [line for line in lines[1:] if line]
    if not body:
        raise TableFormatError(f"{path.name}: table has no rows")
    try:
        data = np.array([[float(v) for v in line.split(",")] for line in body])
    except ValueError as exc:
        raise TableFormatError(f"{path.name}: non-numeric cell ({exc})") from exc
    if data.shape[1] != len(header):
        raise TableFormatError(f"{path.name}: row width does not match the header")
    n = n3 // 3
    return TrajectoryTable(
        times=data[:, 0],
        states=data[:, 1 : 1 + n3].reshape(-1, n, 3),
        v1=data[:, 1 + n3],
        v2=data[:, 2 + n3],
        max_norm=data[:, 3 + n3],
        disagreement=data[:, 4 + n3],
    )
