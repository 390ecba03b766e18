"""Chunk tables, compatibility, and load-time conversion."""

import struct

from hypothesis import given, strategies as st

from blockmem.chunks import (
    ALL_CHUNKS,
    Chunk,
    Vfloat,
    Vint,
    Vptr,
    VUNDEF,
    align_chunk,
    compat,
    convert,
    size_chunk,
    value_text,
)

Values = st.one_of(
    st.just(VUNDEF),
    st.integers(-(2**40), 2**40).map(Vint),
    st.integers(0, 2**64 - 1).map(Vfloat),
    st.builds(Vptr, st.integers(1, 9), st.integers(-16, 16)),
)


def test_size_table():
    assert size_chunk(Chunk.INT8U) == 1
    assert size_chunk(Chunk.INT16S) == 2
    assert size_chunk(Chunk.INT32) == size_chunk(Chunk.FLOAT32) == 4
    assert size_chunk(Chunk.FLOAT64) == 8


def test_align_table():
    assert align_chunk(Chunk.INT8S) == 1
    assert align_chunk(Chunk.INT32) == 4
    assert align_chunk(Chunk.FLOAT64) == 8
    for c in ALL_CHUNKS:
        assert 8 % align_chunk(c) == 0
        assert size_chunk(c) % align_chunk(c) == 0


def test_compat_examples():
    assert compat(Chunk.INT8S, Chunk.INT8U)
    assert compat(Chunk.INT32, Chunk.FLOAT32)
    assert not compat(Chunk.INT16S, Chunk.INT32)


def test_compat_is_equivalence():
    for a in ALL_CHUNKS:
        assert compat(a, a)
        for b in ALL_CHUNKS:
            assert compat(a, b) == compat(b, a)
            for c in ALL_CHUNKS:
                if compat(a, b) and compat(b, c):
                    assert compat(a, c)


def test_convert_int_examples():
    assert convert(Vint(300), Chunk.INT8U) == Vint(44)  # 300 mod 256
    assert convert(Vint(7), Chunk.INT32) == Vint(7)
    assert convert(Vint(200), Chunk.INT8S) == Vint(-56)
    assert convert(Vint(40000), Chunk.INT16S) == Vint(40000 - 65536)
    assert convert(Vint(-1), Chunk.INT16U) == Vint(65535)
    assert convert(Vint(2**31), Chunk.INT32) == Vint(-(2**31))
    assert convert(Vint(5), Chunk.FLOAT32) == VUNDEF
    assert convert(Vint(5), Chunk.FLOAT64) == VUNDEF


def test_convert_undef_and_pointer():
    assert convert(VUNDEF, Chunk.FLOAT64) == VUNDEF
    assert convert(Vptr(2, 0), Chunk.INT16S) == VUNDEF
    assert convert(Vptr(2, 4), Chunk.INT32) == Vptr(2, 4)
    assert convert(Vptr(2, 4), Chunk.FLOAT32) == VUNDEF


def _f32_roundtrip_bits(x: float) -> int:
    try:
        single = struct.unpack("<f", struct.pack("<f", x))[0]
    except OverflowError:
        single = float("inf") if x > 0 else float("-inf")
    return struct.unpack("<Q", struct.pack("<d", single))[0]


def test_convert_float_examples():
    f = Vfloat.from_float(1.5)
    assert convert(f, Chunk.FLOAT64) == f
    assert convert(f, Chunk.FLOAT32) == f  # exact in single precision
    tenth = Vfloat.from_float(0.1)
    assert convert(tenth, Chunk.FLOAT32) == Vfloat(_f32_roundtrip_bits(0.1))
    big = Vfloat.from_float(1e39)
    assert convert(big, Chunk.FLOAT32) == Vfloat.from_float(float("inf"))
    neg = Vfloat.from_float(-0.0)
    assert convert(neg, Chunk.FLOAT32) == neg
    assert convert(f, Chunk.INT32) == VUNDEF


def test_convert_nan_is_stable():
    nan = Vfloat.from_float(float("nan"))
    out = convert(nan, Chunk.FLOAT32)
    assert out == convert(nan, Chunk.FLOAT32)
    assert out != VUNDEF


@given(Values, st.sampled_from(ALL_CHUNKS))
def test_convert_idempotent(v, t):
    once = convert(v, t)
    assert convert(once, t) == once


@given(st.integers(-(2**40), 2**40), st.sampled_from(ALL_CHUNKS))
def test_convert_int_canonical_range(n, t):
    out = convert(Vint(n), t)
    if type(out) is Vint:
        width = {Chunk.INT8S: 8, Chunk.INT8U: 8, Chunk.INT16S: 16, Chunk.INT16U: 16}.get(
            t, 32
        )
        signed = t in (Chunk.INT8S, Chunk.INT16S, Chunk.INT32)
        if signed:
            assert -(2 ** (width - 1)) <= out.value < 2 ** (width - 1)
        else:
            assert 0 <= out.value < 2**width


def test_value_text():
    assert value_text(VUNDEF) == "undef"
    assert value_text(Vint(-3)) == "(int -3)"
    assert value_text(Vptr(2, 5)) == "(ptr 2 5)"
    assert value_text(Vfloat.from_float(1.5)) == "(float 0x3FF8000000000000)"


def test_chunk_tokens_roundtrip():
    for c in ALL_CHUNKS:
        assert Chunk.from_token(c.token) is c
    assert Chunk.from_token("bogus") is None
