"""Pair-encoding tensors and the QPET binary interchange format.

A PETensor holds an (N, N, K) stack of per-node-pair encoding values plus a
metadata record naming the encoding and its parameters.  The QPET format is
a flat little-endian layout: magic ``QPET``, u32 version, u32 dims N, N, K,
N*N*K float64 values (i outer, j middle, k inner), then a u32-length-prefixed
UTF-8 JSON metadata blob.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

QPET_MAGIC = b"QPET"
QPET_VERSION = 1


@dataclass(frozen=True)
class PETensor:
    values: np.ndarray          # (N, N, K) float64
    encoding: str
    params: dict = field(default_factory=dict)
    normalization: str = "none"

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.ndim != 3 or vals.shape[0] != vals.shape[1]:
            raise ValueError(f"PETensor values must be (N, N, K), got {vals.shape}")
        if vals.shape[2] < 1:
            raise ValueError("PETensor needs K >= 1 slices")
        if not np.isfinite(vals).all():
            raise ValueError("PETensor contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def num_nodes(self):
        return self.values.shape[0]

    @property
    def num_slices(self):
        return self.values.shape[2]

    def slice(self, k):
        return self.values[:, :, k]

    def metadata(self):
        return {
            "encoding": self.encoding,
            "params": self.params,
            "normalization": self.normalization,
        }


def save_petensor(t: PETensor, path):
    n, _, k = t.values.shape
    meta = json.dumps(t.metadata(), sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(QPET_MAGIC)
        fh.write(struct.pack("<IIII", QPET_VERSION, n, n, k))
        fh.write(t.values.astype("<f8").tobytes(order="C"))
        fh.write(struct.pack("<I", len(meta)))
        fh.write(meta)


def load_petensor(path) -> PETensor:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != QPET_MAGIC:
            raise ValueError(f"not a QPET file (magic {magic!r})")
        version, n1, n2, k = struct.unpack("<IIII", fh.read(16))
        if version != QPET_VERSION:
            raise ValueError(f"unsupported QPET version {version}")
        vals = np.frombuffer(fh.read(8 * n1 * n2 * k), dtype="<f8").reshape(n1, n2, k)
        (meta_len,) = struct.unpack("<I", fh.read(4))
        meta = json.loads(fh.read(meta_len).decode("utf-8"))
    return PETensor(
        values=vals.astype(np.float64),
        encoding=meta.get("encoding", "unknown"),
        params=meta.get("params", {}),
        normalization=meta.get("normalization", "none"),
    )
