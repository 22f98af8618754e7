import random


def value_with_popcount(k: int, bits: int, rng: random.Random, signed: bool = True) -> int:
    """A value representable in `bits` whose magnitude has exactly k set bits."""
    max_pos = bits - 2 if signed else bits - 1
    positions = rng.sample(range(max_pos + 1), k)
    mag = sum(1 << p for p in positions)
    if signed and rng.random() < 0.5:
        return -mag
    return mag


def mobilenet_like_values(seed: int = 7) -> list[int]:
    """1000 int8 values whose popcount histogram averages exactly 2.334.

    666 values with two set bits plus 334 with three: (666*2 + 334*3)/1000.
    """
    rng = random.Random(seed)
    values = [value_with_popcount(2, 8, rng) for _ in range(666)]
    values += [value_with_popcount(3, 8, rng) for _ in range(334)]
    rng.shuffle(values)
    return values
