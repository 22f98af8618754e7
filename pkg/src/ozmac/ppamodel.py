"""Analytical power/performance/area/energy model for the two MAC units.

Calibration constants are embedded as data (``data/calibration.json``),
one record per (unit, precision, frequency), exactly as measured on the
TSMC N5 node. The published improvement percentages ride along as a
separate data set (``data/published_improvements.json``) because they
were derived from unrounded measurements and cannot be recovered from
the rounded per-unit values; where no published figure exists for a
requested comparison, improvements are computed from the record values
and flagged as such.

The energy model is linear in cycles: ``E = P x cycles x period``.
Power is treated as frequency-proportional and, at fixed frequency, as
independent of input sparsity (only latency varies when sweeping
sparsity). Average cycle counts are either supplied by a sparsity
report or back-derived from a calibration record as latency x frequency.

The calibration table is read-only after load; every evaluation here is
a pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Sequence

from .core import OzmacError, PrecisionConfig, Unit


class PpaError(OzmacError):
    pass


class NegativeInput(PpaError):
    pass


class NonPositivePower(PpaError):
    pass


class NonPositiveFrequency(PpaError):
    pass


class NonPositiveInput(PpaError):
    pass


class NonPositiveBaseline(PpaError):
    pass


class MissingRecord(PpaError):
    """No calibration record covers the requested unit/precision/frequency."""


class UnknownConfig(MissingRecord):
    pass


@dataclass(frozen=True)
class PpaRecord:
    """One calibrated (unit, precision, frequency) measurement."""

    unit: Unit
    weight_bits: int
    activation_bits: int
    freq_ghz: float
    area_um2: float
    power_mw: float
    latency_ns: float
    energy_pj: float
    provenance: str

    @property
    def config(self) -> str:
        return f"{self.weight_bits}x{self.activation_bits}"

    @property
    def period_ns(self) -> float:
        return 1.0 / self.freq_ghz

    @property
    def avg_cycles(self) -> float:
        """Average cycles per operation, back-derived as latency x frequency."""
        return self.latency_ns * self.freq_ghz

    def consistency_error(self) -> float:
        """Relative gap between the energy field and power x latency."""
        return abs(self.energy_pj - self.power_mw * self.latency_ns) / self.energy_pj

    def to_dict(self) -> dict:
        return {
            "unit": self.unit.value,
            "weight_bits": self.weight_bits,
            "activation_bits": self.activation_bits,
            "freq_ghz": self.freq_ghz,
            "area_um2": self.area_um2,
            "power_mw": self.power_mw,
            "latency_ns": self.latency_ns,
            "energy_pj": self.energy_pj,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class ImprovementRow:
    """Percent improvements of the zero-skipping unit over the binary baseline."""

    config: str
    freq_ghz: float
    area_pct: float | None
    power_pct: float | None
    energy_pct: float | None
    source: str


@dataclass(frozen=True)
class CalibrationTable:
    """Read-only measurement set plus the published improvement figures."""

    records: tuple[PpaRecord, ...]
    published: dict[str, tuple[ImprovementRow, ...]]

    @classmethod
    def from_records(cls, records: Sequence[PpaRecord],
                     published: dict | None = None) -> "CalibrationTable":
        return cls(tuple(records), dict(published or {}))

    @classmethod
    def load(cls, path) -> "CalibrationTable":
        """Load a calibration file: a JSON array of record objects."""
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_records([_record_from_dict(d) for d in raw])

    @classmethod
    def builtin(cls) -> "CalibrationTable":
        data = resources.files(__package__) / "data"
        records = [_record_from_dict(d)
                   for d in json.loads((data / "calibration.json").read_text(encoding="utf-8"))]
        published_raw = json.loads((data / "published_improvements.json").read_text(encoding="utf-8"))
        published = {}
        for group in ("precision_sweep", "frequency_sweep", "throughput_matched"):
            published[group] = tuple(
                ImprovementRow(row["config"], row["freq_ghz"], row["area_pct"],
                               row["power_pct"], row["energy_pct"], "published")
                for row in published_raw[group])
        return cls(tuple(records), published)

    def configs(self) -> list[str]:
        seen = []
        for rec in sorted(self.records, key=lambda r: (r.weight_bits, r.activation_bits)):
            if rec.config not in seen:
                seen.append(rec.config)
        return seen

    def find(self, unit: Unit, config: str, freq_ghz: float) -> PpaRecord:
        """Exact record lookup; MissingRecord when absent."""
        for rec in self.records:
            if rec.unit is unit and rec.config == config and abs(rec.freq_ghz - freq_ghz) < 1e-9:
                return rec
        raise MissingRecord(f"no {unit.value} record for {config} at {freq_ghz} GHz")

    def resolve(self, unit: Unit, config: str, freq_ghz: float) -> PpaRecord:
        """Exact lookup, falling back to frequency-scaling the nearest record."""
        try:
            return self.find(unit, config, freq_ghz)
        except MissingRecord:
            candidates = [r for r in self.records if r.unit is unit and r.config == config]
            if not candidates:
                raise
            base = min(candidates, key=lambda r: abs(r.freq_ghz - freq_ghz))
            return scale_frequency(base, freq_ghz)

    def published_improvements(self, group: str, config: str,
                               freq_ghz: float | None = None) -> ImprovementRow | None:
        for row in self.published.get(group, ()):
            if row.config == config and (freq_ghz is None or abs(row.freq_ghz - freq_ghz) < 1e-9):
                return row
        return None


def _record_from_dict(d: dict) -> PpaRecord:
    return PpaRecord(Unit(d["unit"]), int(d["weight_bits"]), int(d["activation_bits"]),
                     float(d["freq_ghz"]), float(d["area_um2"]), float(d["power_mw"]),
                     float(d["latency_ns"]), float(d["energy_pj"]), str(d.get("provenance", "")))


def energy_per_mac(power_mw: float, cycles: float, period_ns: float) -> float:
    """Energy of one MAC operation in pJ: power x cycles x clock period."""
    if power_mw < 0 or cycles < 0 or period_ns < 0:
        raise NegativeInput("power, cycles and period must all be >= 0")
    return power_mw * cycles * period_ns


def crossover_sparsity(p_bmac_mw: float, p_ozmac_mw: float, bits: int) -> float:
    """Minimum bit sparsity at which the zero-skipping unit wins on energy.

    ``1 - (p_bmac / p_ozmac) / bits`` clamped to [0, 1]; below this
    sparsity the zero-skipping unit's energy exceeds the baseline's.
    """
    if p_ozmac_mw <= 0 or p_bmac_mw <= 0:
        raise NonPositivePower("both power values must be > 0")
    if bits <= 0:
        raise ValueError("bits must be > 0")
    ratio = p_bmac_mw / p_ozmac_mw
    return min(1.0, max(0.0, 1.0 - ratio / bits))


def energy_vs_sparsity(cfg: PrecisionConfig, freq_ghz: float,
                       sparsity_grid: Sequence[float],
                       calib: CalibrationTable | None = None,
                       ) -> list[tuple[float, float, float]]:
    """Energy per MAC of both units across a bit-sparsity grid.

    The zero-skipping unit's expected cycles at sparsity ``s`` are
    ``encoded_bits x (1 - s)``; the baseline is one cycle regardless.
    The two curves intersect at :func:`crossover_sparsity`.
    """
    if freq_ghz <= 0:
        raise NonPositiveFrequency("frequency must be > 0")
    if any(s < 0 or s > 1 for s in sparsity_grid):
        raise ValueError("sparsity values must lie in [0, 1]")
    calib = calib or CalibrationTable.builtin()
    try:
        oz = calib.resolve(Unit.OZMAC, cfg.name, freq_ghz)
        bm = calib.resolve(Unit.BMAC, cfg.name, freq_ghz)
    except MissingRecord as exc:
        raise UnknownConfig(str(exc)) from exc
    period = 1.0 / freq_ghz
    bits = cfg.encoded_bits
    e_b = energy_per_mac(bm.power_mw, 1.0, period)
    out = []
    for s in sparsity_grid:
        e_oz = energy_per_mac(oz.power_mw, bits * (1.0 - s), period)
        out.append((s, e_oz, e_b))
    return out


def find_crossover(points: Sequence[tuple[float, float, float]]) -> float | None:
    """Sparsity where the two emitted curves cross, by linear interpolation."""
    prev = None
    for s, e_oz, e_b in points:
        diff = e_oz - e_b
        if diff == 0:
            return s
        if prev is not None:
            s0, d0 = prev
            if d0 > 0 and diff < 0:
                return s0 + (s - s0) * d0 / (d0 - diff)
        prev = (s, diff)
    return None


def scale_frequency(record: PpaRecord, new_freq_ghz: float) -> PpaRecord:
    """Re-target a record to another clock frequency.

    Power scales with frequency, latency inversely; area and energy are
    unchanged. Scaling by 1.0 returns an identical record.
    """
    if new_freq_ghz <= 0:
        raise NonPositiveFrequency("frequency must be > 0")
    ratio = new_freq_ghz / record.freq_ghz
    if ratio == 1.0:
        return record
    return replace(record, freq_ghz=new_freq_ghz,
                   power_mw=record.power_mw * ratio,
                   latency_ns=record.latency_ns / ratio,
                   provenance=f"{record.provenance}; rescaled to {new_freq_ghz} GHz")


def iso_latency_frequency(avg_cycles: float, target_latency_ns: float) -> float:
    """Clock frequency (GHz) at which ``avg_cycles`` take ``target_latency_ns``."""
    if avg_cycles <= 0 or target_latency_ns <= 0:
        raise NonPositiveInput("cycles and target latency must be > 0")
    return avg_cycles / target_latency_ns


def improvement_pct(baseline: float, candidate: float) -> float:
    """Percent improvement of ``candidate`` over ``baseline``; negative when worse."""
    if baseline <= 0:
        raise NonPositiveBaseline("baseline must be > 0")
    return 100.0 * (baseline - candidate) / baseline


@dataclass(frozen=True)
class SweepRow:
    """One precision/frequency comparison: both unit records plus improvements."""

    config: str
    freq_ghz: float
    bmac: PpaRecord
    ozmac: PpaRecord
    improvements: ImprovementRow


def _improvements_for(calib: CalibrationTable, group: str, bm: PpaRecord, oz: PpaRecord,
                      freq_key: float | None = None) -> ImprovementRow:
    published = calib.published_improvements(group, oz.config, freq_key)
    area = improvement_pct(bm.area_um2, oz.area_um2)
    power = improvement_pct(bm.power_mw, oz.power_mw)
    energy = improvement_pct(bm.energy_pj, oz.energy_pj)
    if published is None:
        return ImprovementRow(oz.config, oz.freq_ghz, area, power, energy, "computed")
    return ImprovementRow(
        oz.config, oz.freq_ghz,
        published.area_pct if published.area_pct is not None else area,
        published.power_pct if published.power_pct is not None else power,
        published.energy_pct if published.energy_pct is not None else energy,
        "published")


def precision_sweep(calib: CalibrationTable | None = None, freq_ghz: float = 0.5,
                    configs: Sequence[str] | None = None) -> list[SweepRow]:
    """Per-precision comparison rows at one frequency.

    Emits, per config, both unit records and the improvement row;
    improvement percentages come from the published figures when
    available, otherwise they are computed from the record values.
    """
    calib = calib or CalibrationTable.builtin()
    rows = []
    for config in (configs or calib.configs()):
        bm = calib.resolve(Unit.BMAC, config, freq_ghz)
        oz = calib.resolve(Unit.OZMAC, config, freq_ghz)
        rows.append(SweepRow(config, freq_ghz, bm, oz,
                             _improvements_for(calib, "precision_sweep", bm, oz, freq_ghz)))
    return rows


def frequency_sweep(calib: CalibrationTable | None = None, config: str = "8x8",
                    freqs: Sequence[float] = (0.5, 1.0, 1.5)) -> list[SweepRow]:
    """Fixed-precision comparison rows across clock frequencies."""
    calib = calib or CalibrationTable.builtin()
    rows = []
    for freq in freqs:
        bm = calib.resolve(Unit.BMAC, config, freq)
        oz = calib.resolve(Unit.OZMAC, config, freq)
        rows.append(SweepRow(config, freq, bm, oz,
                             _improvements_for(calib, "frequency_sweep", bm, oz, freq)))
    return rows


@dataclass(frozen=True)
class IsoRow:
    """Throughput-matching comparison: the zero-skipping unit sped up to the
    baseline's per-operation latency."""

    config: str
    freq_ghz: float
    ozmac: PpaRecord
    bmac: PpaRecord
    published_freq_ghz: float | None
    improvements: ImprovementRow


def iso_sweep(calib: CalibrationTable | None = None, target_latency_ns: float = 2.0,
              configs: Sequence[str] | None = None, base_freq_ghz: float = 0.5,
              ) -> list[IsoRow]:
    """Throughput-matching rows: scale each zero-skipping record so its average
    operation takes ``target_latency_ns``, then compare against the baseline
    at ``base_freq_ghz``.

    The 16x16 config is excluded by default; its latency overhead is too
    high for throughput matching to be worthwhile.
    """
    calib = calib or CalibrationTable.builtin()
    if configs is None:
        configs = [c for c in calib.configs() if c != "16x16"]
    rows = []
    for config in configs:
        bm = calib.resolve(Unit.BMAC, config, base_freq_ghz)
        oz_base = calib.resolve(Unit.OZMAC, config, base_freq_ghz)
        freq = iso_latency_frequency(oz_base.avg_cycles, target_latency_ns)
        oz = scale_frequency(oz_base, freq)
        published = calib.published_improvements("throughput_matched", config)
        imp = _improvements_for(calib, "throughput_matched", bm, oz)
        rows.append(IsoRow(config, freq, oz, bm,
                           published.freq_ghz if published else None, imp))
    return rows


def area_power_series(rows: Sequence[SweepRow]) -> dict:
    """Area and power versus the product of the two operand widths, per unit."""
    def product(config: str) -> int:
        w, _, a = config.partition("x")
        return int(w) * int(a)

    ordered = sorted(rows, key=lambda r: product(r.config))
    return {
        "bit_product": [product(r.config) for r in ordered],
        "config": [r.config for r in ordered],
        "area_um2": {"ozmac": [r.ozmac.area_um2 for r in ordered],
                     "bmac": [r.bmac.area_um2 for r in ordered]},
        "power_mw": {"ozmac": [r.ozmac.power_mw for r in ordered],
                     "bmac": [r.bmac.power_mw for r in ordered]},
    }
