"""Binary snapshot format: byte layout, bit-exact round trips, error offsets."""

import struct

import numpy as np
import pytest

from oddflow.snapshots import (
    MAGIC,
    SnapshotFormatError,
    read_snapshot,
    read_timeseries,
    write_snapshot,
    write_timeseries,
)


def _sample_fields(rng, shape=(12, 9)):
    return {
        "rho": rng.standard_normal(shape),
        "u1": rng.standard_normal(shape),
        "u2": rng.standard_normal(shape),
    }


def test_round_trip_bit_exact(tmp_path, rng):
    fields = _sample_fields(rng)
    path = tmp_path / "snap.oddf"
    write_snapshot(path, fields)
    back = read_snapshot(path)
    assert list(back) == list(fields)
    for name in fields:
        assert back[name].tobytes() == fields[name].astype("<f8").tobytes()


def test_round_trip_special_values(tmp_path):
    a = np.zeros((4, 4))
    a[0, 0] = np.inf
    a[1, 1] = -0.0
    a[2, 2] = np.nextafter(0.0, 1.0)  # smallest subnormal
    write_snapshot(tmp_path / "s.oddf", {"f": a})
    back = read_snapshot(tmp_path / "s.oddf")["f"]
    assert back.tobytes() == a.tobytes()


def test_header_layout(tmp_path, rng):
    path = tmp_path / "snap.oddf"
    write_snapshot(path, _sample_fields(rng))
    raw = path.read_bytes()
    assert raw[:4] == MAGIC == b"ODDF"
    version, nx, ny, nfields = struct.unpack("<4I", raw[4:20])
    assert (version, nx, ny, nfields) == (1, 9, 12, 3)
    assert raw[20:36] == b"rho".ljust(16, b" ")
    assert raw[36:52] == b"u1".ljust(16, b" ")
    # payload starts right after the name table and is row-major doubles
    first = struct.unpack("<d", raw[68:76])[0]
    assert first == read_snapshot(path)["rho"][0, 0]


def test_field_order_preserved(tmp_path, rng):
    fields = {"zeta": rng.standard_normal((4, 4)), "alpha": rng.standard_normal((4, 4))}
    write_snapshot(tmp_path / "s.oddf", fields)
    assert list(read_snapshot(tmp_path / "s.oddf")) == ["zeta", "alpha"]


def test_bad_magic(tmp_path):
    p = tmp_path / "bad.oddf"
    p.write_bytes(b"JUNKxxxxxxxxxxxxxxxx")
    with pytest.raises(SnapshotFormatError) as exc:
        read_snapshot(p)
    assert exc.value.offset == 0


def test_truncated_header(tmp_path):
    p = tmp_path / "bad.oddf"
    p.write_bytes(b"ODDF\x01\x00")
    with pytest.raises(SnapshotFormatError):
        read_snapshot(p)


def test_unsupported_version(tmp_path):
    p = tmp_path / "bad.oddf"
    p.write_bytes(MAGIC + struct.pack("<4I", 9, 4, 4, 0))
    with pytest.raises(SnapshotFormatError) as exc:
        read_snapshot(p)
    assert exc.value.offset == 4


def test_truncated_payload(tmp_path, rng):
    p = tmp_path / "snap.oddf"
    write_snapshot(p, _sample_fields(rng))
    raw = p.read_bytes()
    p.write_bytes(raw[:-10])
    with pytest.raises(SnapshotFormatError) as exc:
        read_snapshot(p)
    assert "u2" in str(exc.value)


def test_rejects_long_or_non_ascii_names(tmp_path):
    a = np.zeros((4, 4))
    with pytest.raises(ValueError):
        write_snapshot(tmp_path / "s.oddf", {"x" * 17: a})
    with pytest.raises(ValueError):
        write_snapshot(tmp_path / "s.oddf", {"dénsité": a})


def test_rejects_mismatched_shapes(tmp_path):
    with pytest.raises(ValueError):
        write_snapshot(tmp_path / "s.oddf",
                       {"a": np.zeros((4, 4)), "b": np.zeros((5, 4))})


def test_timeseries_round_trip(tmp_path):
    cols = ["t", "value"]
    rows = [[0.0, 1.0 / 3.0], [0.1, 2.0 / 7.0]]
    write_timeseries(tmp_path / "ts.csv", cols, rows)
    header, data = read_timeseries(tmp_path / "ts.csv")
    assert header == cols
    # repr round-trips doubles exactly
    assert data[0, 1] == 1.0 / 3.0
    assert data[1, 1] == 2.0 / 7.0
