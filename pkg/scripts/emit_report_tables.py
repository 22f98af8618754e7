#!/usr/bin/env python3
"""Regenerate every calibrated table and plot-data file in one go.

Writes, under --out (default report/):
  precision_table.csv    per-precision PPA comparison at 500 MHz
  frequency_table.csv    8x8 comparison at 0.5 / 1.0 / 1.5 GHz
  iso_table.csv          throughput-matching frequencies and improvements
  energy_curve_<cfg>.csv energy vs bit-sparsity grid per precision config
  area_power_series.json area/power vs bit-product series for plotting

Usage: python scripts/emit_report_tables.py --out report/
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ozmac.cli import main as cli
from ozmac.ppamodel import CalibrationTable, area_power_series, precision_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="report", metavar="DIR")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    cli(["ppa", "table", "--format", "csv", "--out", str(out / "precision_table.csv")])
    for freq in ("0.5", "1.0", "1.5"):
        cli(["ppa", "table", "--config", "8x8", "--freq", freq, "--format", "csv",
             "--out", str(out / f"frequency_table_{freq.replace('.', '_')}ghz.csv")])
    cli(["ppa", "iso", "--format", "csv", "--out", str(out / "iso_table.csv")])

    calib = CalibrationTable.builtin()
    for config in calib.configs():
        cli(["ppa", "curve", "--config", config, "--format", "csv",
             "--out", str(out / f"energy_curve_{config}.csv")])

    series = area_power_series(precision_sweep(calib))
    (out / "area_power_series.json").write_text(json.dumps(series, indent=2) + "\n")

    print(f"wrote report files to {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
