"""Reader and writer for the OZTD binary tensor format.

Little-endian layout, bit exact:

======  =====================================================
bytes   field
======  =====================================================
0-3     magic ``OZTD``
4-5     version, u16, must be 1
6       dtype_bits, u8, one of {4, 8, 16}
7       signedness, u8: 0 = unsigned, 1 = two's complement
8-11    ndim, u32
...     ndim x u64 dims
...     payload: one element per ceil(dtype_bits/8) bytes,
        two's complement little-endian; 4-bit elements occupy
        a full byte with the high nibble zero
======  =====================================================

Parsing is strict: bad magic, unknown version, truncated headers,
dimension/payload size mismatch, trailing bytes and out-of-range
elements are all hard errors.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from math import prod
from pathlib import Path

import numpy as np

from .core import OutOfRange, OzmacError, Signedness, value_range

MAGIC = b"OZTD"
VERSION = 1

_HEADER = struct.Struct("<4sHBBI")


class FormatError(OzmacError):
    """Base class for OZTD parse failures."""


class BadMagic(FormatError):
    pass


class UnsupportedVersion(FormatError):
    pass


class DimMismatch(FormatError):
    pass


class ValueOutOfRange(FormatError):
    pass


def _payload_dtype(dtype_bits: int, signedness: Signedness) -> np.dtype:
    signed = signedness is Signedness.TWOS_COMPLEMENT
    if dtype_bits == 16:
        return np.dtype("<i2" if signed else "<u2")
    # 4-bit elements are stored one per byte
    return np.dtype("i1" if signed else "u1")


@dataclass
class TensorFile:
    """A loaded quantized tensor: flat values plus shape and dtype metadata."""

    dtype_bits: int
    signedness: Signedness
    dims: tuple[int, ...]
    values: np.ndarray

    @property
    def count(self) -> int:
        return int(self.values.size)


def loads(data: bytes) -> TensorFile:
    """Parse OZTD bytes; rejects any deviation from the format."""
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic(f"expected magic {MAGIC!r}")
    if len(data) < _HEADER.size:
        raise DimMismatch("truncated header")
    _, version, dtype_bits, signedness_code, ndim = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise UnsupportedVersion(f"version {version}, expected {VERSION}")
    if dtype_bits not in (4, 8, 16):
        raise FormatError(f"dtype_bits {dtype_bits} not in (4, 8, 16)")
    if signedness_code not in (0, 1):
        raise FormatError(f"signedness byte {signedness_code} not in (0, 1)")
    signedness = Signedness.TWOS_COMPLEMENT if signedness_code else Signedness.UNSIGNED
    if ndim < 1:
        raise DimMismatch("ndim must be >= 1")

    offset = _HEADER.size
    dims_end = offset + 8 * ndim
    if len(data) < dims_end:
        raise DimMismatch("truncated dimension list")
    dims = struct.unpack_from(f"<{ndim}Q", data, offset)
    if any(d < 1 for d in dims):
        raise DimMismatch(f"dims must be positive, got {dims}")

    count = prod(dims)
    elem_bytes = 2 if dtype_bits == 16 else 1
    expected = count * elem_bytes
    payload = data[dims_end:]
    if len(payload) != expected:
        raise DimMismatch(
            f"dims {dims} imply {expected} payload bytes, file has {len(payload)}")

    raw = np.frombuffer(payload, dtype=_payload_dtype(dtype_bits, signedness))
    if dtype_bits == 4:
        nibbles = raw.view(np.uint8)
        if (nibbles & 0xF0).any():
            bad = int(nibbles[(nibbles & 0xF0) != 0][0])
            raise ValueOutOfRange(f"4-bit element byte {bad:#04x} has a nonzero high nibble")
        if signedness is Signedness.TWOS_COMPLEMENT:
            values = np.where(nibbles >= 8, nibbles.astype(np.int16) - 16, nibbles).astype(np.int8)
        else:
            values = nibbles.copy()
    else:
        values = raw.copy()
    return TensorFile(dtype_bits, signedness, tuple(int(d) for d in dims), values)


def load_tensor(path) -> TensorFile:
    """Load and validate one OZTD file."""
    return loads(Path(path).read_bytes())


def dumps(tensor: TensorFile) -> bytes:
    """Serialize a tensor to OZTD bytes; deterministic for identical input."""
    values = np.asarray(tensor.values).reshape(-1)
    if values.size != prod(tensor.dims) or any(d < 1 for d in tensor.dims):
        raise DimMismatch(f"dims {tensor.dims} do not match {values.size} values")
    lo, hi = value_range(tensor.dtype_bits, tensor.signedness)
    vmin, vmax = (int(values.min()), int(values.max())) if values.size else (0, 0)
    if vmin < lo or vmax > hi:
        bad = vmin if vmin < lo else vmax
        raise OutOfRange(bad, tensor.dtype_bits, tensor.signedness)

    header = _HEADER.pack(MAGIC, VERSION, tensor.dtype_bits,
                          1 if tensor.signedness is Signedness.TWOS_COMPLEMENT else 0,
                          len(tensor.dims))
    dims = struct.pack(f"<{len(tensor.dims)}Q", *tensor.dims)
    if tensor.dtype_bits == 4:
        # store the low nibble of the two's complement byte, high nibble zero
        payload = (values.astype(np.int16) & 0xF).astype(np.uint8).tobytes()
    else:
        payload = values.astype(_payload_dtype(tensor.dtype_bits, tensor.signedness)).tobytes()
    return header + dims + payload


def save_tensor(path, tensor: TensorFile) -> None:
    Path(path).write_bytes(dumps(tensor))


def from_values(values, dims, dtype_bits: int,
                signedness: Signedness = Signedness.TWOS_COMPLEMENT) -> TensorFile:
    """Build a TensorFile from any integer sequence, validating ranges."""
    arr = np.asarray(values, dtype=np.int64).reshape(-1)
    lo, hi = value_range(dtype_bits, signedness)
    if arr.size:
        vmin, vmax = int(arr.min()), int(arr.max())
        if vmin < lo or vmax > hi:
            bad = vmin if vmin < lo else vmax
            raise OutOfRange(bad, dtype_bits, signedness)
    narrow = _payload_dtype(dtype_bits, signedness) if dtype_bits != 4 else (
        np.dtype("i1") if signedness is Signedness.TWOS_COMPLEMENT else np.dtype("u1"))
    return TensorFile(dtype_bits, signedness, tuple(int(d) for d in dims), arr.astype(narrow))
