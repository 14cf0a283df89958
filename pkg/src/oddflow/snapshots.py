"""Bit-exact binary field snapshots (ODDF format) and CSV time series.

ODDF layout: magic ASCII "ODDF"; version, nx, ny, nfields as 4-byte
little-endian unsigned ints; nfields 16-byte space-padded ASCII names; then the
fields in declared order, row-major, 8-byte little-endian IEEE-754 doubles.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

MAGIC = b"ODDF"
VERSION = 1


class SnapshotFormatError(ValueError):
    """Malformed ODDF header or payload; carries the failing byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def write_snapshot(path: str | Path, fields: dict[str, np.ndarray]) -> None:
    names = list(fields)
    arrays = [np.ascontiguousarray(fields[k], dtype="<f8") for k in names]
    ny, nx = arrays[0].shape
    for name, a in zip(names, arrays):
        if a.shape != (ny, nx):
            raise ValueError(f"field {name!r} has shape {a.shape}, expected {(ny, nx)}")
        if len(name) > 16 or not name.isascii():
            raise ValueError(f"field name {name!r} must be ASCII, at most 16 bytes")

    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<4I", VERSION, nx, ny, len(names)))
        for name in names:
            fh.write(name.encode("ascii").ljust(16, b" "))
        for a in arrays:
            fh.write(a.tobytes(order="C"))


def read_snapshot(path: str | Path) -> dict[str, np.ndarray]:
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise SnapshotFormatError("bad magic, expected 'ODDF'", 0)
    if len(data) < 20:
        raise SnapshotFormatError("truncated header", len(data))
    version, nx, ny, nfields = struct.unpack("<4I", data[4:20])
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported version {version}", 4)
    pos = 20
    names = []
    for _ in range(nfields):
        if len(data) < pos + 16:
            raise SnapshotFormatError("truncated field-name table", pos)
        names.append(data[pos:pos + 16].decode("ascii").rstrip(" "))
        pos += 16
    out = {}
    nbytes = nx * ny * 8
    for name in names:
        if len(data) < pos + nbytes:
            raise SnapshotFormatError(f"truncated payload for field {name!r}", pos)
        out[name] = np.frombuffer(data[pos:pos + nbytes], dtype="<f8").reshape(ny, nx).copy()
        pos += nbytes
    return out


def write_timeseries(path: str | Path, columns: list[str],
                     rows: list[list[float]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])


def read_timeseries(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, np.array(rows)
