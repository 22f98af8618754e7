import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ozmac.core import (
    AccumulatorOverflow,
    AccumulatorState,
    EmptyInput,
    LengthMismatch,
    Operand,
    PrecisionConfig,
    Role,
    Signedness,
    Unit,
)
from ozmac.macsim import (
    average_cycles,
    bmac_compute,
    dot_product,
    ozmac_compute,
    trace_to_jsonl,
)

from helpers import mobilenet_like_values

CFG44 = PrecisionConfig(4, 4)
CFG88 = PrecisionConfig(8, 8)


def w(v, bits=4):
    return Operand(v, bits, Role.WEIGHT)


def a(v, bits=4):
    return Operand(v, bits, Role.ACTIVATION)


def acc0(cfg):
    return AccumulatorState.zero(cfg)


def test_shift_add_example():
    # oracle: 5 * 3 = 15; MSB-first events are 3<<2 then 3<<0
    trace = ozmac_compute(w(5), a(3), acc0(CFG44), CFG44)
    assert trace.result == 15
    assert trace.cycles == 2
    assert [(e.cycle_index, e.term_position, e.addend, e.accumulator_after)
            for e in trace.events] == [(0, 2, 12, 12), (1, 0, 3, 15)]


def test_zero_weight_skips_entirely():
    start = AccumulatorState(7, CFG44.accumulator_width)
    trace = ozmac_compute(w(0), a(6), start, CFG44)
    assert trace.result == 7
    assert trace.cycles == 0
    assert trace.events == ()


def test_negative_weight_shift_subtract():
    trace = ozmac_compute(w(-5), a(3), acc0(CFG44), CFG44)
    assert trace.result == -15  # oracle: direct multiply
    assert trace.cycles == 2
    assert all(e.addend < 0 for e in trace.events)


def test_mixed_precision_encodes_low_side():
    cfg = PrecisionConfig(4, 8, Signedness.UNSIGNED)
    trace = ozmac_compute(w(3, 4), a(200, 8), acc0(cfg), cfg)
    assert trace.result == 600  # oracle: direct multiply
    assert trace.cycles == 2  # popcount(3), not popcount(200)


def test_encoded_side_follows_lower_precision_activation():
    cfg = PrecisionConfig(8, 4)  # activations narrower: they get encoded
    trace = ozmac_compute(w(127, 8), a(2, 4), acc0(cfg), cfg)
    assert trace.result == 254
    assert trace.cycles == 1  # popcount(2)


def test_bmac_examples():
    trace = bmac_compute(w(5), a(3), acc0(CFG44), CFG44)
    assert (trace.result, trace.cycles) == (15, 1)
    trace = bmac_compute(w(-128, 8), a(127, 8), acc0(CFG88), CFG88)
    assert (trace.result, trace.cycles) == (-16256, 1)  # oracle: -128*127
    trace = bmac_compute(w(0, 8), a(0, 8), acc0(CFG88), CFG88)
    assert (trace.result, trace.cycles) == (0, 1)
    assert len(trace.events) == 1


def test_operand_width_must_match_config():
    with pytest.raises(ValueError):
        ozmac_compute(w(1, 8), a(1, 4), acc0(CFG44), CFG44)
    with pytest.raises(ValueError):
        bmac_compute(w(1, 4), a(1, 8), acc0(CFG44), CFG44)


def test_exhaustive_equivalence_4x4():
    start = acc0(CFG44)
    for wv in range(-8, 8):
        for av in range(-8, 8):
            expect = wv * av
            t_oz = ozmac_compute(w(wv), a(av), start, CFG44)
            t_b = bmac_compute(w(wv), a(av), start, CFG44)
            assert t_oz.result == expect == t_b.result
            assert t_oz.cycles == abs(wv).bit_count()
            assert t_b.cycles == 1


def test_trace_replay_reproduces_result():
    start = AccumulatorState(-9, CFG88.accumulator_width)
    trace = ozmac_compute(w(-77, 8), a(113, 8), start, CFG88)
    acc = start.value
    for event in trace.events:
        acc += event.addend
        assert acc == event.accumulator_after
    assert acc == trace.result == -9 + (-77) * 113


def test_accumulator_overflow_raises():
    top = AccumulatorState((1 << 31) - 1, 32)
    with pytest.raises(AccumulatorOverflow):
        ozmac_compute(w(1, 8), a(1, 8), top, CFG88)
    with pytest.raises(AccumulatorOverflow):
        bmac_compute(w(1, 8), a(1, 8), top, CFG88)


def test_intermediate_overflow_detected():
    # first shift-add overshoots even though the final product would fit
    near_top = AccumulatorState((1 << 31) - 200, 32)
    with pytest.raises(AccumulatorOverflow):
        ozmac_compute(w(3, 8), a(127, 8), near_top, CFG88)


def test_dot_product_examples():
    ws = [w(1), w(2)]
    acts = [a(3), a(4)]
    assert dot_product(ws, acts, CFG44, Unit.OZMAC) == (11, 2)
    assert dot_product(ws, acts, CFG44, Unit.BMAC) == (11, 2)
    zeros = [w(0)] * 3
    nines = [a(9, 8)] * 3
    cfg = PrecisionConfig(4, 8)
    assert dot_product(zeros, nines, cfg, Unit.OZMAC) == (0, 0)
    assert dot_product(zeros, nines, cfg, Unit.BMAC) == (0, 3)


def test_dot_product_errors():
    with pytest.raises(LengthMismatch):
        dot_product([w(1)], [a(1), a(2)], CFG44, Unit.OZMAC)
    with pytest.raises(EmptyInput):
        dot_product([], [], CFG44, Unit.OZMAC)


def test_dot_product_random_against_oracle():
    rng = random.Random(11)
    ws = [w(rng.randint(-128, 127), 8) for _ in range(64)]
    acts = [a(rng.randint(-128, 127), 8) for _ in range(64)]
    expect = sum(x.value * y.value for x, y in zip(ws, acts))
    cycles = sum(abs(x.value).bit_count() for x in ws)
    assert dot_product(ws, acts, CFG88, Unit.OZMAC) == (expect, cycles)
    assert dot_product(ws, acts, CFG88, Unit.BMAC) == (expect, 64)


def test_average_cycles():
    two_bits = [w(0b101, 8), w(0b1100, 8), w(-0b11, 8)]
    assert average_cycles(two_bits) == 2.0
    assert average_cycles([w(0, 8)] * 5) == 0.0
    with pytest.raises(EmptyInput):
        average_cycles([])


def test_average_cycles_matches_published_benchmark_mean():
    values = mobilenet_like_values()
    ops = [w(v, 8) for v in values]
    assert average_cycles(ops) == 2.334


def test_trace_jsonl_golden():
    trace = ozmac_compute(w(5), a(3), acc0(CFG44), CFG44)
    lines = trace_to_jsonl(trace).splitlines()
    assert [json.loads(line) for line in lines] == [
        {"cycle_index": 0, "position": 2, "addend": 12, "accumulator_after": 12},
        {"cycle_index": 1, "position": 0, "addend": 3, "accumulator_after": 15},
    ]


@given(wv=st.integers(min_value=-(1 << 15), max_value=(1 << 15) - 1),
       av=st.integers(min_value=-(1 << 15), max_value=(1 << 15) - 1))
def test_equivalence_16x16(wv, av):
    cfg = PrecisionConfig(16, 16)
    start = AccumulatorState.zero(cfg)
    t_oz = ozmac_compute(Operand(wv, 16, Role.WEIGHT), Operand(av, 16, Role.ACTIVATION), start, cfg)
    t_b = bmac_compute(Operand(wv, 16, Role.WEIGHT), Operand(av, 16, Role.ACTIVATION), start, cfg)
    assert t_oz.result == wv * av == t_b.result
    assert t_oz.cycles == abs(wv).bit_count()


def test_equivalence_16x16_million_pairs_and_corners():
    cfg = PrecisionConfig(16, 16)
    start = AccumulatorState.zero(cfg)
    corners = [(-32768, -32768), (-32768, 32767), (32767, -32768), (32767, 32767)]
    rng = random.Random(61)
    pairs = corners + [(rng.getrandbits(16) - 32768, rng.getrandbits(16) - 32768)
                       for _ in range(1_000_000)]
    for wv, av in pairs:
        w = Operand(wv, 16, Role.WEIGHT)
        act = Operand(av, 16, Role.ACTIVATION)
        t_oz = ozmac_compute(w, act, start, cfg)
        assert t_oz.result == wv * av == bmac_compute(w, act, start, cfg).result
        assert t_oz.cycles == abs(wv).bit_count()


@given(wv=st.integers(min_value=-8, max_value=7),
       av=st.integers(min_value=-128, max_value=127),
       av2=st.integers(min_value=-128, max_value=127))
def test_mixed_precision_cycles_independent_of_wide_side(wv, av, av2):
    cfg = PrecisionConfig(4, 8)
    start = AccumulatorState.zero(cfg)
    t1 = ozmac_compute(Operand(wv, 4), Operand(av, 8, Role.ACTIVATION), start, cfg)
    t2 = ozmac_compute(Operand(wv, 4), Operand(av2, 8, Role.ACTIVATION), start, cfg)
    assert t1.cycles == t2.cycles == abs(wv).bit_count()
