"""Zero-skipping MAC toolkit.

Behavioral simulation of a zero-skipping bit-serial multiply-accumulate
unit against its single-cycle binary baseline, bit-sparsity profiling of
quantized weight tensors, and an analytical PPA/energy model calibrated
from published TSMC N5 measurements.
"""

from .core import (
    AccumulatorOverflow,
    AccumulatorState,
    EmptyInput,
    LengthMismatch,
    Operand,
    OutOfRange,
    OzmacError,
    PrecisionConfig,
    Role,
    Signedness,
    Unit,
    validate_operand,
)
from .encoder import EncodedStream, OneHotTerm, cycle_count, oz_decode, oz_encode
from .macsim import (
    MacEvent,
    MacTrace,
    average_cycles,
    bmac_compute,
    dot_product,
    ozmac_compute,
    trace_to_jsonl,
    write_trace_jsonl,
)
from .oztd import TensorFile, from_values, load_tensor, save_tensor
from .ppamodel import (
    CalibrationTable,
    PpaRecord,
    crossover_sparsity,
    energy_per_mac,
    energy_vs_sparsity,
    improvement_pct,
    iso_latency_frequency,
    scale_frequency,
)
from .profiler import SparsityReport, bit_sparsity, model_report

__version__ = "0.1.0"

__all__ = [
    "AccumulatorOverflow", "AccumulatorState", "EmptyInput", "LengthMismatch",
    "Operand", "OutOfRange", "OzmacError", "PrecisionConfig", "Role", "Signedness",
    "Unit", "validate_operand",
    "EncodedStream", "OneHotTerm", "cycle_count", "oz_decode", "oz_encode",
    "MacEvent", "MacTrace", "average_cycles", "bmac_compute", "dot_product",
    "ozmac_compute", "trace_to_jsonl", "write_trace_jsonl",
    "TensorFile", "from_values", "load_tensor", "save_tensor",
    "CalibrationTable", "PpaRecord", "crossover_sparsity", "energy_per_mac",
    "energy_vs_sparsity", "improvement_pct", "iso_latency_frequency", "scale_frequency",
    "SparsityReport", "bit_sparsity", "model_report",
]
