import struct

import numpy as np
import pytest

from ozmac.core import OutOfRange, Signedness
from ozmac.oztd import (
    BadMagic,
    DimMismatch,
    TensorFile,
    UnsupportedVersion,
    ValueOutOfRange,
    dumps,
    from_values,
    load_tensor,
    loads,
    save_tensor,
)


def header(magic=b"OZTD", version=1, dtype_bits=8, signedness=1, dims=(2, 3)):
    return (struct.pack("<4sHBBI", magic, version, dtype_bits, signedness, len(dims))
            + struct.pack(f"<{len(dims)}Q", *dims))


GOLDEN_PAYLOAD = bytes([0x01, 0xFE, 0x03, 0xFC, 0x05, 0xFA])  # 1,-2,3,-4,5,-6 as int8


def test_golden_bytes_load():
    data = header() + GOLDEN_PAYLOAD
    assert len(data) == 34
    tensor = loads(data)
    assert tensor.dims == (2, 3)
    assert tensor.dtype_bits == 8
    assert tensor.signedness is Signedness.TWOS_COMPLEMENT
    assert tensor.values.tolist() == [1, -2, 3, -4, 5, -6]


def test_writer_emits_golden_bytes():
    tensor = from_values([1, -2, 3, -4, 5, -6], (2, 3), 8)
    assert dumps(tensor) == header() + GOLDEN_PAYLOAD


def test_bad_magic():
    with pytest.raises(BadMagic):
        loads(header(magic=b"XXXX") + GOLDEN_PAYLOAD)
    with pytest.raises(BadMagic):
        loads(b"OZ")


def test_unsupported_version():
    with pytest.raises(UnsupportedVersion):
        loads(header(version=2) + GOLDEN_PAYLOAD)


def test_payload_shorter_than_dims():
    with pytest.raises(DimMismatch):
        loads(header() + GOLDEN_PAYLOAD[:5])


def test_trailing_bytes_rejected():
    with pytest.raises(DimMismatch):
        loads(header() + GOLDEN_PAYLOAD + b"\x00")


def test_truncated_header_and_dims():
    with pytest.raises(DimMismatch):
        loads(b"OZTD\x01\x00")
    with pytest.raises(DimMismatch):
        loads(header()[:-4] )


def test_zero_or_missing_dims_rejected():
    with pytest.raises(DimMismatch):
        loads(header(dims=(0, 3)) + GOLDEN_PAYLOAD)
    with pytest.raises(DimMismatch):
        loads(struct.pack("<4sHBBI", b"OZTD", 1, 8, 1, 0))


def test_4bit_high_nibble_must_be_zero():
    data = header(dtype_bits=4, dims=(2,)) + bytes([0x0B, 0x1B])
    with pytest.raises(ValueOutOfRange):
        loads(data)


def test_4bit_nibble_decoding():
    data = header(dtype_bits=4, dims=(3,)) + bytes([0x0B, 0x07, 0x08])
    tensor = loads(data)
    assert tensor.values.tolist() == [-5, 7, -8]  # oracle: two's complement nibbles
    unsigned = loads(header(dtype_bits=4, signedness=0, dims=(3,)) + bytes([0x0B, 0x07, 0x08]))
    assert unsigned.values.tolist() == [11, 7, 8]


def test_16bit_little_endian():
    data = header(dtype_bits=16, dims=(2,)) + bytes([0x34, 0x12, 0xFE, 0xFF])
    tensor = loads(data)
    assert tensor.values.tolist() == [0x1234, -2]


@pytest.mark.parametrize("dtype_bits,signedness,values", [
    (4, Signedness.TWOS_COMPLEMENT, [-8, -1, 0, 7]),
    (4, Signedness.UNSIGNED, [0, 9, 15]),
    (8, Signedness.TWOS_COMPLEMENT, [-128, -1, 0, 127]),
    (8, Signedness.UNSIGNED, [0, 128, 255]),
    (16, Signedness.TWOS_COMPLEMENT, [-32768, -300, 0, 32767]),
    (16, Signedness.UNSIGNED, [0, 40000, 65535]),
])
def test_round_trip_all_dtypes(tmp_path, dtype_bits, signedness, values):
    path = tmp_path / "t.oztd"
    save_tensor(path, from_values(values, (len(values),), dtype_bits, signedness))
    back = load_tensor(path)
    assert back.values.tolist() == values
    assert back.dtype_bits == dtype_bits
    assert back.signedness is signedness


def test_from_values_range_checked():
    with pytest.raises(OutOfRange):
        from_values([8], (1,), 4)
    with pytest.raises(OutOfRange):
        from_values([-1], (1,), 8, Signedness.UNSIGNED)


def test_dumps_rejects_dim_value_mismatch():
    tensor = TensorFile(8, Signedness.TWOS_COMPLEMENT, (4,), np.array([1, 2], dtype=np.int8))
    with pytest.raises(DimMismatch):
        dumps(tensor)
