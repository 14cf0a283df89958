"""Readers for the simulator's on-disk artifacts.

The snapshot format (magic "ODDF") is parsed here from its byte-level
description, independently of the code that writes it: header of four
little-endian u32 (version, nx, ny, nfields) after the magic, a table of
16-byte space-padded ASCII names, then row-major float64 payloads in declared
order. Doubles are passed through untouched so a load/save cycle is
bit-exact.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

MAGIC = b"ODDF"
SUPPORTED_VERSION = 1


class SnapshotError(ValueError):
    """Malformed snapshot; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class SchemaError(ValueError):
    """A CSV is missing columns the requested figure needs."""


def load_snapshot(path: str | Path) -> dict[str, np.ndarray]:
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise SnapshotError("bad magic, want ASCII 'ODDF'", 0)
    if len(raw) < 20:
        raise SnapshotError("header truncated", len(raw))
    version, nx, ny, nfields = struct.unpack_from("<4I", raw, 4)
    if version != SUPPORTED_VERSION:
        raise SnapshotError(f"unsupported version {version}", 4)

    offset = 20
    names = []
    for _ in range(nfields):
        if len(raw) < offset + 16:
            raise SnapshotError("name table truncated", offset)
        cell = raw[offset:offset + 16]
        try:
            names.append(cell.decode("ascii").rstrip(" "))
        except UnicodeDecodeError as exc:
            raise SnapshotError("field name is not ASCII", offset) from exc
        offset += 16

    fields = {}
    count = nx * ny
    for name in names:
        end = offset + 8 * count
        if len(raw) < end:
            raise SnapshotError(f"payload truncated in field {name!r}", offset)
        fields[name] = (np.frombuffer(raw[offset:end], dtype="<f8")
                        .reshape(ny, nx).copy())
        offset = end
    return fields


def load_timeseries(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    data = np.array(rows) if rows else np.empty((0, len(header)))
    return header, data


def require_columns(header: list[str], wanted: list[str], path: str | Path) -> None:
    missing = [c for c in wanted if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}")
