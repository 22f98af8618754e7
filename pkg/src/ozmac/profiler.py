"""Bit-sparsity statistics over quantized weight tensors.

Popcounts are taken on element magnitudes, not on the stored two's
complement bit pattern, so a tensor's average set-bit count equals the
zero-skipping unit's average cycle count on the same values. Reports
carry the full popcount histogram; display formatting reproduces the
histogram totals in exact decimal arithmetic (averages at 3 decimals,
percentages at 2, half-up).

Per-file loading and per-layer statistics are independent; the
aggregate is a deterministic count-weighted reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .core import EmptyInput, OzmacError
from .oztd import TensorFile, load_tensor


class MixedDtype(OzmacError):
    pass


# Popcount lookup covering every magnitude of a 16-bit value (|−32768| included).
_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


def popcounts(values: np.ndarray) -> np.ndarray:
    """Per-element popcount of the magnitude."""
    mags = np.abs(np.asarray(values, dtype=np.int64))
    return _POPCOUNT[mags]


@dataclass(frozen=True)
class SparsityReport:
    """Set-bit statistics for one tensor group.

    ``histogram[k]`` counts elements whose magnitude has k set bits;
    ``bit_sparsity_pct`` is ``100 * (1 - avg_ones / dtype_bits)``.
    """

    name: str
    count: int
    avg_ones: float
    bit_sparsity_pct: float
    histogram: tuple[int, ...]

    @property
    def dtype_bits(self) -> int:
        return len(self.histogram) - 1

    @property
    def total_ones(self) -> int:
        return sum(k * n for k, n in enumerate(self.histogram))

    @classmethod
    def from_histogram(cls, name: str, histogram: Sequence[int], dtype_bits: int | None = None,
                       ) -> "SparsityReport":
        hist = tuple(int(n) for n in histogram)
        if dtype_bits is not None:
            if dtype_bits + 1 < len(hist):
                raise ValueError(f"histogram has counts beyond popcount {dtype_bits}")
            hist = hist + (0,) * (dtype_bits + 1 - len(hist))
        count = sum(hist)
        if count == 0:
            raise EmptyInput("histogram is empty")
        bits = len(hist) - 1
        total = sum(k * n for k, n in enumerate(hist))
        avg = total / count
        return cls(name, count, avg, 100.0 * (1.0 - avg / bits), hist)

    def format_avg_ones(self) -> str:
        """Average set bits at 3 decimals, computed exactly from the histogram."""
        avg = Decimal(self.total_ones) / Decimal(self.count)
        return str(avg.quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))

    def format_sparsity_pct(self) -> str:
        """Sparsity percentage at 2 decimals, computed exactly from the histogram."""
        zeros = Decimal(self.count * self.dtype_bits - self.total_ones)
        pct = Decimal(100) * zeros / Decimal(self.count * self.dtype_bits)
        return str(pct.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def bit_sparsity(tensors: Sequence[TensorFile], name: str) -> SparsityReport:
    """Sparsity report over the union of all values of the given tensors."""
    if not tensors:
        raise EmptyInput("no tensors given")
    bits = tensors[0].dtype_bits
    for t in tensors:
        if t.dtype_bits != bits:
            raise MixedDtype(f"{t.dtype_bits}-bit tensor mixed with {bits}-bit")
    hist = np.zeros(bits + 1, dtype=np.int64)
    total = 0
    for t in tensors:
        if t.count == 0:
            continue
        counts = popcounts(t.values)
        hist += np.bincount(counts, minlength=bits + 1)
        total += t.count
    if total == 0:
        raise EmptyInput("tensors hold no values")
    return SparsityReport.from_histogram(name, hist.tolist())


def _merge(name: str, reports: Sequence[SparsityReport]) -> SparsityReport:
    bits = reports[0].dtype_bits
    hist = [0] * (bits + 1)
    for r in reports:
        if r.dtype_bits != bits:
            raise MixedDtype(f"{r.dtype_bits}-bit layer mixed with {bits}-bit")
        for k, n in enumerate(r.histogram):
            hist[k] += n
    return SparsityReport.from_histogram(name, hist)


def model_report(layer_files: Sequence[tuple[str, object]],
                 ) -> tuple[list[SparsityReport], SparsityReport]:
    """Per-layer sparsity reports plus the count-weighted aggregate.

    ``layer_files`` is a sequence of (layer name, OZTD path). Load
    failures re-raise with the layer name attached.
    """
    if not layer_files:
        raise EmptyInput("no layers given")
    layers = []
    for layer_name, path in layer_files:
        try:
            tensor = load_tensor(path)
        except OzmacError as exc:
            raise type(exc)(f"layer {layer_name!r}: {exc}") from exc
        layers.append(bit_sparsity([tensor], layer_name))
    return layers, _merge("aggregate", layers)
