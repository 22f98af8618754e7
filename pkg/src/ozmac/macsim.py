"""Cycle-accurate behavioral model of the two MAC units.

``ozmac_compute`` replays the Oz-encoded stream one term per cycle: each
cycle shifts the non-encoded operand left by the term position, applies
the encoded operand's sign, and adds into the accumulator. Cycle count
therefore equals the popcount of the encoded operand's magnitude, and a
zero encoded operand completes in zero cycles. ``bmac_compute`` is the
single-cycle combinational baseline. Both return exact integer results
or raise AccumulatorOverflow; there is no wraparound path.

Pure functions over immutable inputs; sweeps parallelize freely.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Sequence

from .core import (
    AccumulatorOverflow,
    AccumulatorState,
    EmptyInput,
    LengthMismatch,
    Operand,
    PrecisionConfig,
    Role,
    Unit,
)
from .encoder import oz_encode


@dataclass(frozen=True, slots=True)
class MacEvent:
    """One clock cycle: the shifted, sign-applied addend and the accumulator after it."""

    cycle_index: int
    term_position: int
    addend: int
    accumulator_after: int


@dataclass(frozen=True, slots=True)
class MacTrace:
    """Per-operation record: exact result, cycle count and per-cycle events."""

    result: int
    cycles: int
    events: tuple[MacEvent, ...]
    config: PrecisionConfig


def _check_pair(weight: Operand, activation: Operand, cfg: PrecisionConfig) -> None:
    if weight.bits != cfg.weight_bits:
        raise ValueError(f"weight is {weight.bits}-bit but config expects {cfg.weight_bits}")
    if activation.bits != cfg.activation_bits:
        raise ValueError(f"activation is {activation.bits}-bit but config expects {cfg.activation_bits}")


def _checked(value: int, width: int) -> int:
    if not -(1 << (width - 1)) <= value <= (1 << (width - 1)) - 1:
        raise AccumulatorOverflow(f"accumulator value {value} exceeds {width}-bit range")
    return value


def ozmac_compute(weight: Operand, activation: Operand, acc_in: AccumulatorState,
                  cfg: PrecisionConfig) -> MacTrace:
    """Zero-skipping multiply-accumulate of one operand pair.

    The encoded side is the lower-precision operand (weights on ties);
    the other operand is shifted and added once per set bit. The result
    is exactly ``acc_in + weight * activation``.
    """
    _check_pair(weight, activation, cfg)
    if cfg.encoded_side is Role.WEIGHT:
        encoded, other = weight, activation
    else:
        encoded, other = activation, weight

    stream = oz_encode(encoded)
    sign = -1 if stream.negative else 1
    width = cfg.accumulator_width
    acc = acc_in.value
    events = []
    for i, term in enumerate(stream.terms):
        addend = sign * (other.value << term.position)
        acc = _checked(acc + addend, width)
        events.append(MacEvent(i, term.position, addend, acc))
    return MacTrace(acc, len(events), tuple(events), cfg)


def bmac_compute(weight: Operand, activation: Operand, acc_in: AccumulatorState,
                 cfg: PrecisionConfig) -> MacTrace:
    """Single-cycle binary multiply-accumulate of one operand pair."""
    _check_pair(weight, activation, cfg)
    addend = weight.value * activation.value
    acc = _checked(acc_in.value + addend, cfg.accumulator_width)
    event = MacEvent(0, 0, addend, acc)
    return MacTrace(acc, 1, (event,), cfg)


_COMPUTE = {Unit.OZMAC: ozmac_compute, Unit.BMAC: bmac_compute}


def dot_product(weights: Sequence[Operand], activations: Sequence[Operand],
                cfg: PrecisionConfig, unit: Unit) -> tuple[int, int]:
    """Sequential dot product through one MAC unit.

    Returns ``(sum of products, total cycles)``; the accumulator threads
    through the pairs in order. Total cycles is the sum of per-pair
    popcounts for the zero-skipping unit and the pair count for the
    binary unit.
    """
    if len(weights) != len(activations):
        raise LengthMismatch(f"{len(weights)} weights vs {len(activations)} activations")
    if not weights:
        raise EmptyInput("dot product needs at least one operand pair")
    compute = _COMPUTE[Unit(unit)]
    acc = AccumulatorState.zero(cfg)
    total_cycles = 0
    for w, a in zip(weights, activations):
        trace = compute(w, a, acc, cfg)
        total_cycles += trace.cycles
        acc = AccumulatorState(trace.result, acc.width)
    return acc.value, total_cycles


def average_cycles(weights: Sequence[Operand]) -> float:
    """Mean zero-skipping cycle count over a weight set.

    Popcount of the magnitude, averaged; matches the profiler's
    average set-bit statistic on the same values.
    """
    if not weights:
        raise EmptyInput("average_cycles needs at least one operand")
    total = 0
    for w in weights:
        total += abs(w.value).bit_count()
    return total / len(weights)


def trace_to_jsonl(trace: MacTrace) -> str:
    """Render a trace as JSON lines, one event per line, for golden files."""
    buf = io.StringIO()
    for ev in trace.events:
        json.dump({"cycle_index": ev.cycle_index, "position": ev.term_position,
                   "addend": ev.addend, "accumulator_after": ev.accumulator_after},
                  buf, separators=(",", ":"))
        buf.write("\n")
    return buf.getvalue()


def write_trace_jsonl(trace: MacTrace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(trace_to_jsonl(trace))
