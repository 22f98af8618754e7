"""Self-contained OZTD writer for 8-bit signed tensors.

Deliberately independent of the simulator package: the binary format is
the only contract shared with it. Layout (little-endian): magic "OZTD",
u16 version = 1, u8 dtype_bits, u8 signedness (1 = two's complement),
u32 ndim, ndim x u64 dims, then one int8 element per byte.
"""

from __future__ import annotations

import struct
from math import prod
from pathlib import Path

import numpy as np

MAGIC = b"OZTD"
VERSION = 1
DTYPE_BITS = 8
TWOS_COMPLEMENT = 1


def oztd_bytes(values, dims) -> bytes:
    arr = np.ascontiguousarray(values, dtype=np.int64).reshape(-1)
    if arr.size != prod(dims) or any(d < 1 for d in dims):
        raise ValueError(f"dims {tuple(dims)} do not match {arr.size} values")
    if arr.size and (arr.min() < -128 or arr.max() > 127):
        raise ValueError("values outside int8 range")
    header = struct.pack("<4sHBBI", MAGIC, VERSION, DTYPE_BITS, TWOS_COMPLEMENT, len(dims))
    packed_dims = struct.pack(f"<{len(dims)}Q", *dims)
    return header + packed_dims + arr.astype(np.int8).tobytes()


def write_oztd(path, values, dims) -> None:
    Path(path).write_bytes(oztd_bytes(values, dims))
