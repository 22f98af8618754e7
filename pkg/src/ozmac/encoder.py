"""Oz-encoding: a value's magnitude as an ordered stream of one-hot terms.

The encoder walks the magnitude MSB-first and emits one term per set
bit, skipping zero bits entirely, so the stream length equals the
popcount of the magnitude and an all-zero input yields an empty stream.
Negative inputs are handled sign-magnitude: the magnitude is encoded
and the sign travels as a flag on the stream, which keeps the shift
terms unsigned. The most negative two's-complement value is fine -- the
magnitude is simply one bit wider than the signed-positive maximum and
its single set bit still lands at position ``bits - 1``.

Everything here is a pure function over immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Operand


@dataclass(frozen=True, slots=True)
class OneHotTerm:
    """A single shift term: mask with exactly one set bit at ``position``."""

    mask: int
    position: int

    def __post_init__(self):
        if self.position < 0 or self.mask != 1 << self.position:
            raise ValueError(f"mask {self.mask:#x} is not one-hot at position {self.position}")


@dataclass(frozen=True, slots=True)
class EncodedStream:
    """Ordered one-hot terms for one operand, MSB first, plus its sign."""

    terms: tuple[OneHotTerm, ...]
    negative: bool
    source_bits: int


def oz_encode(op: Operand) -> EncodedStream:
    """Encode an operand's magnitude into its one-hot term stream.

    Term positions strictly decrease (MSB-first emission), the stream
    holds popcount(|value|) terms, and the term masks sum back to the
    magnitude.
    """
    mag = -op.value if op.value < 0 else op.value
    terms = []
    while mag:
        pos = mag.bit_length() - 1
        terms.append(OneHotTerm(1 << pos, pos))
        mag ^= 1 << pos
    return EncodedStream(tuple(terms), op.value < 0, op.bits)


def oz_decode(stream: EncodedStream) -> int:
    """Inverse of :func:`oz_encode`: sum the masks and re-apply the sign."""
    total = 0
    for term in stream.terms:
        total += term.mask
    return -total if stream.negative else total


def cycle_count(op: Operand) -> int:
    """Cycles the zero-skipping unit spends on this operand.

    Equal to popcount of the magnitude, and therefore to the length of
    the encoded stream; a zero operand costs zero cycles.
    """
    return abs(op.value).bit_count()
