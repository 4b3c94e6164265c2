import struct

import numpy as np
import pytest

from qgpe.petensor import PETensor, QPET_MAGIC, load_petensor, save_petensor


def make_tensor():
    rng = np.random.default_rng(0)
    return PETensor(
        rng.normal(size=(4, 4, 3)),
        encoding="rrwp",
        params={"steps": 3},
        normalization="none",
    )


def test_shape_validation():
    with pytest.raises(ValueError):
        PETensor(np.zeros((3, 4, 2)), "x")
    with pytest.raises(ValueError):
        PETensor(np.zeros((3, 3)), "x")
    with pytest.raises(ValueError):
        PETensor(np.full((2, 2, 1), np.nan), "x")


def test_round_trip_bit_exact(tmp_path):
    t = make_tensor()
    p = tmp_path / "t.qpet"
    save_petensor(t, p)
    u = load_petensor(p)
    assert u.values.tobytes() == t.values.tobytes()
    assert u.encoding == t.encoding
    assert u.params == t.params
    assert u.normalization == t.normalization


def test_save_deterministic_bytes(tmp_path):
    t = make_tensor()
    p1, p2 = tmp_path / "a.qpet", tmp_path / "b.qpet"
    save_petensor(t, p1)
    save_petensor(t, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_binary_layout(tmp_path):
    # frozen format: magic, u32 version, u32 dims, row-major f64, json blob
    vals = np.arange(8.0).reshape(2, 2, 2)
    t = PETensor(vals, encoding="e", params={})
    p = tmp_path / "t.qpet"
    save_petensor(t, p)
    raw = p.read_bytes()
    assert raw[:4] == QPET_MAGIC
    version, n1, n2, k = struct.unpack("<IIII", raw[4:20])
    assert (version, n1, n2, k) == (1, 2, 2, 2)
    payload = np.frombuffer(raw[20 : 20 + 64], dtype="<f8")
    assert payload.tolist() == list(range(8))  # i outer, j middle, k inner


def test_reject_foreign_file(tmp_path):
    p = tmp_path / "bad.qpet"
    p.write_bytes(b"NOPE" + b"\0" * 32)
    with pytest.raises(ValueError):
        load_petensor(p)
