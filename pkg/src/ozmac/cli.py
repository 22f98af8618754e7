"""Command-line entry point: encode / simulate / profile / ppa workflows.

Output formats
--------------
``--format table`` renders aligned text (the default on a terminal),
``csv`` emits a header row plus data rows (the default when stdout is
redirected), ``json`` emits one object per invocation with a ``command``
key and a ``rows`` list (or command-specific keys, documented per
handler). CSV output is byte-identical for identical inputs: fixed
column order, fixed decimal formatting (areas/power/latency/energy at 3
decimals, improvement percentages at 1, averages at 3, sparsity
percentages at 2, half-up).

Exit codes: 0 success, 2 input or validation error, 3 missing
calibration record.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from . import macsim, ppamodel, profiler
from .core import (
    EmptyInput,
    LengthMismatch,
    Operand,
    OzmacError,
    PrecisionConfig,
    Role,
    Signedness,
    Unit,
    validate_operand,
)
from .encoder import oz_encode
from .oztd import load_tensor


def fmt(x: float, dp: int) -> str:
    """Fixed-point decimal string, half-up, for deterministic table output."""
    return str(Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-dp), rounding=ROUND_HALF_UP))


def _pick_format(args) -> str:
    if args.format:
        return args.format
    if args.out:
        return "csv"
    return "table" if sys.stdout.isatty() else "csv"


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_rows(args, command: str, columns: list[str], rows: list[dict],
               table_text: str | None = None) -> None:
    """Render rows in the selected format. JSON schema: {command, rows: [...]}."""
    kind = _pick_format(args)
    if kind == "json":
        _write(args, json.dumps({"command": command, "rows": rows}, indent=2) + "\n")
    elif kind == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else row[c] for c in columns])
        _write(args, buf.getvalue())
    else:
        if table_text is not None:
            _write(args, table_text)
        else:
            widths = [max(len(str(c)), *(len(str(r.get(c, ""))) for r in rows)) if rows else len(c)
                      for c in columns]
            lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
            for row in rows:
                lines.append("  ".join(str(row.get(c, "") if row.get(c) is not None else "").ljust(w)
                                       for c, w in zip(columns, widths)).rstrip())
            _write(args, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# encode
# ---------------------------------------------------------------------------

def cmd_encode(args) -> int:
    op = validate_operand(args.value, args.bits, Signedness(args.signedness))
    stream = oz_encode(op)
    masks = [format(t.mask, f"0{args.bits}b") for t in stream.terms]
    cycles = len(stream.terms)

    if _pick_format(args) == "json":
        _write(args, json.dumps({
            "command": "encode", "value": args.value, "bits": args.bits,
            "negative": stream.negative, "cycles": cycles,
            "masks": masks, "positions": [t.position for t in stream.terms],
        }, indent=2) + "\n")
        return 0
    if masks:
        text = ("-" if stream.negative else "") + ",".join(masks) + f" ({cycles} cycles)\n"
    else:
        text = f"({cycles} cycles)\n"
    if _pick_format(args) == "csv":
        rows = [{"mask": m, "position": t.position} for m, t in zip(masks, stream.terms)]
        _emit_rows(args, "encode", ["mask", "position"], rows)
    else:
        _write(args, text)
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _operands_from(tensor, role: Role) -> list[Operand]:
    return [Operand(int(v), tensor.dtype_bits, role) for v in tensor.values]


def cmd_simulate(args) -> int:
    weights_t = load_tensor(args.weights)
    acts_t = load_tensor(args.activations)
    if weights_t.count != acts_t.count:
        raise LengthMismatch(
            f"{weights_t.count} weights vs {acts_t.count} activations")
    cfg = PrecisionConfig(weights_t.dtype_bits, acts_t.dtype_bits, weights_t.signedness)
    if args.precision and PrecisionConfig.parse(args.precision).name != cfg.name:
        raise ValueError(f"--precision {args.precision} does not match the input "
                         f"files ({cfg.name})")
    weights = _operands_from(weights_t, Role.WEIGHT)
    acts = _operands_from(acts_t, Role.ACTIVATION)
    result, total_cycles = macsim.dot_product(weights, acts, cfg, Unit(args.unit))
    avg = total_cycles / len(weights)

    kind = _pick_format(args)
    if kind == "json":
        _write(args, json.dumps({
            "command": "simulate", "unit": args.unit, "precision": cfg.name,
            "count": len(weights), "result": result,
            "total_cycles": total_cycles, "avg_cycles_per_mac": avg,
        }, indent=2) + "\n")
    elif kind == "csv":
        _emit_rows(args, "simulate", ["result", "total_cycles", "avg_cycles_per_mac"],
                   [{"result": result, "total_cycles": total_cycles,
                     "avg_cycles_per_mac": fmt(avg, 3)}])
    else:
        _write(args, f"result {result}\ntotal_cycles {total_cycles}\n"
                     f"avg_cycles_per_mac {fmt(avg, 3)}\n")
    return 0


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------

def _collect_layers(paths: list[str]) -> list[tuple[str, Path]]:
    layers = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            layers.extend((f.stem, f) for f in sorted(p.glob("*.oztd")))
        else:
            layers.append((p.stem, p))
    return layers


def cmd_profile(args) -> int:
    layer_files = _collect_layers(args.paths)
    if not layer_files:
        raise EmptyInput("no .oztd files found in the given paths")
    layers, aggregate = profiler.model_report(layer_files)
    rows = [{"name": r.name, "count": r.count, "avg_ones": r.format_avg_ones(),
             "bit_sparsity_pct": r.format_sparsity_pct()}
            for r in [*layers, aggregate]]
    _emit_rows(args, "profile", ["name", "count", "avg_ones", "bit_sparsity_pct"], rows)
    return 0


# ---------------------------------------------------------------------------
# ppa
# ---------------------------------------------------------------------------

def _load_calib(args) -> ppamodel.CalibrationTable:
    if args.calib:
        return ppamodel.CalibrationTable.load(args.calib)
    return ppamodel.CalibrationTable.builtin()


def _sweep_rows(sweep: list[ppamodel.SweepRow]) -> list[dict]:
    out = []
    for row in sweep:
        for unit_rec in (row.bmac, row.ozmac):
            out.append({
                "config": row.config, "freq_ghz": fmt(row.freq_ghz, 1),
                "row": unit_rec.unit.value,
                "area_um2": fmt(unit_rec.area_um2, 3), "power_mw": fmt(unit_rec.power_mw, 3),
                "latency_ns": fmt(unit_rec.latency_ns, 3), "energy_pj": fmt(unit_rec.energy_pj, 3),
                "source": "published" if "rescaled" not in unit_rec.provenance else "scaled",
            })
        imp = row.improvements
        out.append({
            "config": row.config, "freq_ghz": fmt(row.freq_ghz, 1),
            "row": "improvement_pct",
            "area_um2": None if imp.area_pct is None else fmt(imp.area_pct, 1),
            "power_mw": None if imp.power_pct is None else fmt(imp.power_pct, 1),
            "latency_ns": None,
            "energy_pj": None if imp.energy_pct is None else fmt(imp.energy_pct, 1),
            "source": imp.source,
        })
    return out


def cmd_ppa_table(args) -> int:
    calib = _load_calib(args)
    configs = None if args.config in (None, "all") else [args.config]
    if args.freq == 0.5 or configs is None:
        sweep = ppamodel.precision_sweep(calib, args.freq, configs)
    else:
        sweep = ppamodel.frequency_sweep(calib, configs[0], [args.freq])
    columns = ["config", "freq_ghz", "row", "area_um2", "power_mw",
               "latency_ns", "energy_pj", "source"]
    _emit_rows(args, "ppa table", columns, _sweep_rows(sweep))
    return 0


def cmd_ppa_curve(args) -> int:
    calib = _load_calib(args)
    cfg = PrecisionConfig.parse(args.config)
    steps = round(1.0 / args.step)
    grid = [i / steps for i in range(steps + 1)]
    points = ppamodel.energy_vs_sparsity(cfg, args.freq, grid, calib)
    rows = []
    crossed = False
    for s, e_oz, e_b in points:
        # tolerate float dust so an exact-equality grid point is flagged
        flag = 1 if not crossed and e_oz <= e_b * (1 + 1e-9) else 0
        crossed = crossed or flag
        rows.append({"sparsity": fmt(s, 2), "e_ozmac_pj": fmt(e_oz, 3),
                     "e_bmac_pj": fmt(e_b, 3), "crossover": flag})
    _emit_rows(args, "ppa curve", ["sparsity", "e_ozmac_pj", "e_bmac_pj", "crossover"], rows)
    return 0


def cmd_ppa_iso(args) -> int:
    calib = _load_calib(args)
    configs = None if args.config in (None, "all") else [args.config]
    rows = []
    for row in ppamodel.iso_sweep(calib, configs=configs):
        imp = row.improvements
        rows.append({
            "config": row.config, "freq_ghz": fmt(row.freq_ghz, 1),
            "power_mw": fmt(row.ozmac.power_mw, 3),
            "latency_ns": fmt(row.ozmac.latency_ns, 3),
            "energy_pj": fmt(row.ozmac.energy_pj, 3),
            "published_freq_ghz": None if row.published_freq_ghz is None
            else fmt(row.published_freq_ghz, 1),
            "power_improvement_pct": None if imp.power_pct is None else fmt(imp.power_pct, 1),
            "energy_improvement_pct": None if imp.energy_pct is None else fmt(imp.energy_pct, 1),
        })
    columns = ["config", "freq_ghz", "power_mw", "latency_ns", "energy_pj",
               "published_freq_ghz", "power_improvement_pct", "energy_improvement_pct"]
    _emit_rows(args, "ppa iso", columns, rows)
    return 0


# ---------------------------------------------------------------------------
# argument parsing / dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json", "table"], default=None,
                        help="output format (default: table on a terminal, csv otherwise)")
    common.add_argument("--out", metavar="PATH", default=None,
                        help="write output to PATH instead of stdout")
    common.add_argument("--calib", metavar="PATH", default=None,
                        help="calibration JSON (default: embedded measurements)")

    parser = argparse.ArgumentParser(
        prog="ozmac",
        description="Zero-skipping MAC simulator, bit-sparsity profiler and PPA model")
    sub = parser.add_subparsers(dest="command", required=True)

    p_enc = sub.add_parser("encode", parents=[common],
                           help="show the one-hot stream for a value")
    p_enc.add_argument("--bits", type=int, required=True, choices=[4, 8, 16])
    p_enc.add_argument("--value", type=int, required=True)
    p_enc.add_argument("--signedness", choices=[s.value for s in Signedness],
                       default=Signedness.TWOS_COMPLEMENT.value)
    p_enc.set_defaults(func=cmd_encode)

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="dot product of two OZTD tensors through one MAC unit")
    p_sim.add_argument("--weights", required=True, metavar="OZTD")
    p_sim.add_argument("--activations", required=True, metavar="OZTD")
    p_sim.add_argument("--unit", choices=[u.value for u in Unit], default=Unit.OZMAC.value)
    p_sim.add_argument("--precision", metavar="WxA", default=None,
                       help="expected precision; must match the input files")
    p_sim.set_defaults(func=cmd_simulate)

    p_prof = sub.add_parser("profile", parents=[common],
                            help="bit-sparsity report over OZTD files or directories")
    p_prof.add_argument("paths", nargs="+", metavar="PATH")
    p_prof.set_defaults(func=cmd_profile)

    p_ppa = sub.add_parser("ppa", help="calibrated power/area/energy tables and curves")
    ppa_sub = p_ppa.add_subparsers(dest="ppa_command", required=True)

    p_tab = ppa_sub.add_parser("table", parents=[common],
                               help="per-precision or per-frequency comparison table")
    p_tab.add_argument("--config", default=None, metavar="WxA",
                       help="precision config, e.g. 8x8 (default: all)")
    p_tab.add_argument("--freq", type=float, default=0.5, metavar="GHZ")
    p_tab.set_defaults(func=cmd_ppa_table)

    p_cur = ppa_sub.add_parser("curve", parents=[common],
                               help="energy vs bit-sparsity curves for both units")
    p_cur.add_argument("--config", default="8x8", metavar="WxA")
    p_cur.add_argument("--freq", type=float, default=0.5, metavar="GHZ")
    p_cur.add_argument("--step", type=float, default=0.01)
    p_cur.set_defaults(func=cmd_ppa_curve)

    p_iso = ppa_sub.add_parser("iso", parents=[common],
                               help="throughput-matching frequencies and improvements")
    p_iso.add_argument("--config", default=None, metavar="WxA")
    p_iso.set_defaults(func=cmd_ppa_iso)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ppamodel.MissingRecord as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OzmacError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
