#!/usr/bin/env python3
"""Generate synthetic OZTD weight/activation sets mirroring the eight
INT8 benchmark sparsity levels.

For each benchmark a 1000-element int8 weight tensor is built whose
popcount histogram averages exactly the published set-bit count, plus a
matching uniform activation tensor, so `ozmac profile` and
`ozmac simulate` reproduce the published average cycle counts.

Usage: python scripts/make_synthetic_workloads.py --out workloads/
"""

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ozmac.core import Signedness
from ozmac.oztd import from_values, save_tensor

# benchmark name -> published average number of set bits per INT8 weight
BENCHMARKS = {
    "mobilenet_v2": 2.334,
    "mobilenet_v3": 1.711,
    "inception_v3": 2.430,
    "shufflenet_v2": 2.583,
    "googlenet": 2.461,
    "resnet18": 2.398,
    "resnet50": 2.495,
    "resnext101": 2.289,
}

COUNT = 1000


def value_with_popcount(k: int, rng: random.Random) -> int:
    positions = rng.sample(range(7), k)  # magnitude <= 127 keeps int8 range
    mag = sum(1 << p for p in positions)
    return -mag if rng.random() < 0.5 else mag


def synthesize(avg_ones: float, rng: random.Random) -> list[int]:
    total = round(avg_ones * COUNT)
    k, remainder = divmod(total, COUNT)
    counts = {k: COUNT - remainder, k + 1: remainder}
    values = [value_with_popcount(bits, rng) for bits, n in counts.items() for _ in range(n)]
    rng.shuffle(values)
    return values


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="workloads", metavar="DIR")
    parser.add_argument("--seed", type=int, default=5)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    for name, avg in BENCHMARKS.items():
        weights = synthesize(avg, rng)
        acts = [rng.randint(-128, 127) for _ in range(COUNT)]
        save_tensor(out / f"{name}_weights.oztd",
                    from_values(weights, (COUNT,), 8, Signedness.TWOS_COMPLEMENT))
        save_tensor(out / f"{name}_activations.oztd",
                    from_values(acts, (COUNT,), 8, Signedness.TWOS_COMPLEMENT))
        print(f"{name}: {COUNT} weights, target avg set bits {avg}")
    print(f"wrote {2 * len(BENCHMARKS)} tensors to {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
