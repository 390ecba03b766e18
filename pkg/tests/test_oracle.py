"""The naive twin: independent conversion and differential execution."""

import struct

from hypothesis import given, settings, strategies as st

from blockmem import chunks
from blockmem.chunks import ALL_CHUNKS, Chunk, Vfloat, Vint, Vptr, VUNDEF
from blockmem.lawcheck import oracle
from blockmem.lawcheck.generators import run_ops, sample_ops
from blockmem.lawcheck.oracle import oracle_convert, oracle_exec, oracle_float32_round_bits
from blockmem.lawcheck.rng import SplitMix64

CURATED = [
    0.0,
    -0.0,
    1.0,
    -1.0,
    1.5,
    0.1,
    -2.75,
    3.4028234663852886e38,  # float32 max
    3.5e38,
    1e39,
    -1e39,
    1e-40,
    1e-45,
    5e-324,
    float("inf"),
    float("-inf"),
    float("nan"),
]


def _bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", x))[0]


def test_float32_rounding_matches_struct_on_curated():
    for x in CURATED:
        b = _bits(x)
        assert oracle_float32_round_bits(b) == chunks.float32_round_bits(b), x


@settings(max_examples=2000)
@given(st.integers(0, 2**64 - 1))
def test_float32_rounding_matches_struct_on_random_bits(bits):
    exp = (bits >> 52) & 0x7FF
    if exp == 0x7FF and bits & ((1 << 52) - 1):
        bits |= 1 << 51  # quiet the NaN; signaling payloads are platform lore
    assert oracle_float32_round_bits(bits) == chunks.float32_round_bits(bits)


def test_convert_agreement():
    values = (
        [VUNDEF, Vptr(1, 0), Vptr(2, -3)]
        + [Vint(n) for n in (-(2**40), -65537, -300, -1, 0, 7, 255, 300, 65535, 2**31)]
        + [Vfloat.from_float(x) for x in CURATED]
    )
    for v in values:
        for t in ALL_CHUNKS:
            assert oracle_convert(v, t) == chunks.convert(v, t), (v, t)


def _describe_main(result):
    m = result.state
    return {
        "nextblock": m.nextblock,
        "valid_blocks": sorted(b for b in range(1, m.nextblock) if b not in m.freed),
        "bounds": dict(sorted(m.bounds_.items())),
        "allocated_bytes": m.allocated_bytes,
    }


def test_differential_small_run():
    rng = SplitMix64(7)
    for _ in range(300):
        ops = sample_ops(rng)
        main = run_ops(ops)
        desc, outcomes = oracle_exec(ops)
        assert outcomes == main.outcomes
        assert desc == _describe_main(main)


def test_oracle_respects_capacity_and_alignment_flags():
    ops = [("alloc", 0, 8), ("store", Chunk.INT32, 0, 1, Vint(5))]
    desc, outcomes = oracle_exec(ops, capacity=4)
    assert outcomes[0] == ("alloc", None)
    desc, outcomes = oracle_exec(ops, check_alignment=False)
    assert outcomes == [("alloc", 1), ("store", True)]
