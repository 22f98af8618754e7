"""Shared domain types for the zero-skipping MAC toolkit.

Operands, precision configurations and accumulator state are immutable
value objects; once constructed they can be shared freely between
threads or worker processes. Range checking is exact integer arithmetic
throughout -- no silent wraparound anywhere in the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

SUPPORTED_BITS = (4, 8, 16)

# Headroom on top of the product width. 16 guard bits support at least
# 65,536 back-to-back accumulations without overflow.
GUARD_BITS = 16


class Signedness(enum.Enum):
    UNSIGNED = "unsigned"
    TWOS_COMPLEMENT = "twos_complement"


class Role(enum.Enum):
    WEIGHT = "weight"
    ACTIVATION = "activation"


class Unit(enum.Enum):
    """MAC hardware flavor: zero-skipping bit-serial vs single-cycle binary."""

    OZMAC = "ozmac"
    BMAC = "bmac"


class OzmacError(Exception):
    """Base class for every domain error raised by this package."""


class OutOfRange(OzmacError):
    """A value does not fit the declared bit width."""

    def __init__(self, value: int, bits: int, signedness: Signedness | None = None):
        self.value = value
        self.bits = bits
        self.signedness = signedness
        how = signedness.value if signedness is not None else "any supported signedness"
        super().__init__(f"OutOfRange: value {value} not representable in {bits} bits ({how})")


class AccumulatorOverflow(OzmacError):
    """Accumulator left its declared width; never wrapped silently."""


class LengthMismatch(OzmacError):
    pass


class EmptyInput(OzmacError):
    pass


def value_range(bits: int, signedness: Signedness) -> tuple[int, int]:
    """Inclusive representable range for a width under a signedness convention."""
    if signedness is Signedness.TWOS_COMPLEMENT:
        return -(1 << (bits - 1)), (1 << (bits - 1)) - 1
    return 0, (1 << bits) - 1


@dataclass(frozen=True, slots=True)
class PrecisionConfig:
    """Bit widths of the two MAC inputs plus their signedness convention.

    The operand fed to the Oz-encoder is always the lower-precision one,
    with weights winning ties; ``encoded_side`` exposes that choice.
    """

    weight_bits: int
    activation_bits: int
    signedness: Signedness = Signedness.TWOS_COMPLEMENT

    def __post_init__(self):
        for label, bits in (("weight_bits", self.weight_bits),
                            ("activation_bits", self.activation_bits)):
            if bits not in SUPPORTED_BITS:
                raise ValueError(f"{label} must be one of {SUPPORTED_BITS}, got {bits}")

    @property
    def encoded_side(self) -> Role:
        if self.weight_bits <= self.activation_bits:
            return Role.WEIGHT
        return Role.ACTIVATION

    @property
    def encoded_bits(self) -> int:
        return min(self.weight_bits, self.activation_bits)

    @property
    def accumulator_width(self) -> int:
        return self.weight_bits + self.activation_bits + GUARD_BITS

    @property
    def name(self) -> str:
        return f"{self.weight_bits}x{self.activation_bits}"

    @classmethod
    def parse(cls, text: str, signedness: Signedness = Signedness.TWOS_COMPLEMENT) -> "PrecisionConfig":
        """Parse a ``<weight>x<activation>`` spec such as ``8x8`` or ``4x8``."""
        try:
            w, _, a = text.lower().partition("x")
            return cls(int(w), int(a), signedness)
        except (ValueError, TypeError) as exc:
            raise ValueError(f"bad precision spec {text!r}; expected e.g. 8x8") from exc


@dataclass(frozen=True, slots=True)
class Operand:
    """A signed integer MAC input with its declared bit width.

    The constructor only enforces the loosest window representable under
    either signedness convention; use :func:`validate_operand` for the
    exact per-convention check.
    """

    value: int
    bits: int
    role: Role = Role.WEIGHT

    def __post_init__(self):
        if self.bits not in SUPPORTED_BITS:
            raise ValueError(f"bits must be one of {SUPPORTED_BITS}, got {self.bits}")
        lo = -(1 << (self.bits - 1))
        hi = (1 << self.bits) - 1
        if not lo <= self.value <= hi:
            raise OutOfRange(self.value, self.bits)


def validate_operand(value: int, bits: int, signedness: Signedness,
                     role: Role = Role.WEIGHT) -> Operand:
    """Exact range check of ``value`` against ``bits``/``signedness``.

    Raises OutOfRange when the value is not representable; otherwise
    returns the validated Operand. Accepts exactly 2**bits distinct
    values for every (bits, signedness) pair.
    """
    if bits not in SUPPORTED_BITS:
        raise ValueError(f"bits must be one of {SUPPORTED_BITS}, got {bits}")
    lo, hi = value_range(bits, signedness)
    if not lo <= value <= hi:
        raise OutOfRange(value, bits, signedness)
    return Operand(value, bits, role)


@dataclass(frozen=True, slots=True)
class AccumulatorState:
    """Accumulator contents pinned to a fixed two's-complement width."""

    value: int
    width: int

    def __post_init__(self):
        lo = -(1 << (self.width - 1))
        hi = (1 << (self.width - 1)) - 1
        if not lo <= self.value <= hi:
            raise AccumulatorOverflow(
                f"accumulator value {self.value} exceeds {self.width}-bit range")

    @classmethod
    def zero(cls, cfg: PrecisionConfig) -> "AccumulatorState":
        return cls(0, cfg.accumulator_width)
