"""Trace grammar, execution semantics, and the relate command."""

import pytest

from blockmem.lawcheck.generators import run_ops, sample_ops
from blockmem.lawcheck.oracle import oracle_exec
from blockmem.lawcheck.rng import SplitMix64
from blockmem.memstate import CapacityPolicy, MemConfig
from blockmem.trace import (
    Alloc,
    Load,
    Store,
    TraceParseError,
    exec_trace,
    format_trace,
    parse_embedding,
    parse_trace,
    relate,
)

READ_AFTER_WRITE = """\
# read-after-write
alloc 0 8 -> $a
store int32 $a 0 (int 42)
load int32 $a 0 => (int 42)
free $a
"""


def test_parse_basics():
    t = parse_trace("alloc 0 8 -> $a")
    assert len(t.statements) == 1
    assert isinstance(t.statements[0], Alloc)
    two = parse_trace("alloc 0 8 -> $a\nstore int32 $a 0 (int 42)\nload int32 $a 0 => (int 42)")
    assert len(two.statements) == 3
    assert isinstance(two.statements[1], Store)
    assert isinstance(two.statements[2], Load)


def test_parse_errors_have_positions():
    with pytest.raises(TraceParseError) as e:
        parse_trace("load bogus $a 0 => undef")
    assert e.value.line == 1 and e.value.column == 6

    with pytest.raises(TraceParseError) as e:
        parse_trace("alloc 0 8 -> $a\nfree $b")
    assert e.value.line == 2

    with pytest.raises(TraceParseError):
        parse_trace("alloc 0 8 -> $a\nalloc 0 8 -> $a")  # rebinding

    with pytest.raises(TraceParseError):
        parse_trace("alloc 0 8 -> $a extra")

    with pytest.raises(TraceParseError):
        parse_trace("store int32 $a 0 (int 1)")  # unbound before use

    with pytest.raises(TraceParseError):
        parse_trace("alloc 0 8 -> $a\nstore int32 $a 0 (wat 1)")

    with pytest.raises(TraceParseError):
        parse_trace("[emb]\n1 -> 2 + 0\n[emb]")


def test_roundtrip_with_all_features():
    text = """\
alloc 0 8 -> $a
alloc -4 4 -> $b
store int16u $a 2 (int 70000)
store float64 $a 0 (float 0x3FF8000000000000)
store int32 $a 4 (ptr $b 0)
store int32 $a 4 (ptr 7 -3)
load int32 $a 4 => (ptr 7 -3)
load float32 $b -4 => undef
load int8s $b 9 => fail
expect-fail store int32 $b 3 (int 1)
expect-fail alloc 0 8 -> $c
assert-valid $a
assert-bounds $b -4 4
free-list $a $b
[emb]
1 -> 3 + 8
2 -> 3 + 16
"""
    t = parse_trace(text)
    assert parse_trace(format_trace(t)) == t
    assert t.emb == ((1, 3, 8), (2, 3, 16))


def test_exec_read_after_write():
    report = exec_trace(parse_trace(READ_AFTER_WRITE))
    assert report.ok
    assert [s.ok for s in report.steps] == [True] * 4


def test_exec_load_before_store_is_undef():
    t = parse_trace("alloc 0 8 -> $a\nload int32 $a 4 => undef")
    assert exec_trace(t).ok


def test_exec_load_after_free_fails():
    t = parse_trace("alloc 0 8 -> $a\nfree $a\nload int32 $a 0 => fail")
    assert exec_trace(t).ok


def test_exec_assertion_failure_reports_line():
    t = parse_trace("alloc 0 8 -> $a\nload int32 $a 0 => (int 9)")
    report = exec_trace(t)
    assert not report.ok
    assert report.failure.line == 2


def test_exec_unexpected_failure_stops():
    t = parse_trace("alloc 0 8 -> $a\nfree $a\nfree $a")
    report = exec_trace(t)
    assert not report.ok and report.failure.line == 3


def test_expect_fail_semantics():
    ok = parse_trace("alloc 0 8 -> $a\nexpect-fail store int32 $a 1 (int 1)")
    assert exec_trace(ok).ok
    bad = parse_trace("alloc 0 8 -> $a\nexpect-fail store int32 $a 0 (int 1)")
    assert not exec_trace(bad).ok


def test_capacity_config_flows_into_execution():
    t = parse_trace("expect-fail alloc 0 64 -> $a")
    cfg = MemConfig(capacity=CapacityPolicy(max_total_bytes=16))
    assert exec_trace(t, cfg).ok
    assert not exec_trace(t).ok  # unlimited by default, alloc succeeds


def test_assert_bounds():
    t = parse_trace("alloc -4 12 -> $a\nassert-bounds $a -4 12\nassert-valid $a")
    assert exec_trace(t).ok


def test_parse_embedding_file():
    emb = parse_embedding("[emb]\n# comment\n1 -> 2 + 8\n3 -> 2 + -16\n")
    assert emb == {1: (2, 8), 3: (2, -16)}


def test_relate_lessdef_and_inject():
    t1 = parse_trace("alloc 0 8 -> $x\nstore int32 $x 0 (int 1)")
    t2 = parse_trace("alloc 0 8 -> $y\nstore int32 $y 0 (int 1)")
    assert relate(t1, t2, "lessdef").ok
    assert relate(t1, t2, "extends").ok
    assert relate(t1, t2, "inject", emb={1: (1, 0)}).ok
    # refinement: left stores nothing where right stores a defined value
    tu = parse_trace("alloc 0 8 -> $x")
    assert relate(tu, t2, "lessdef").ok
    assert not relate(t2, tu, "lessdef").ok


def test_relate_uses_trace_emb_section():
    t1 = parse_trace("alloc 0 8 -> $x\nstore int32 $x 4 (int 3)")
    t2 = parse_trace("alloc 8 16 -> $y\nstore int32 $y 12 (int 3)\n[emb]\n1 -> 1 + 8")
    assert relate(t1, t2, "inject").ok


def test_relate_inject_needs_emb():
    t = parse_trace("alloc 0 8 -> $x")
    with pytest.raises(ValueError):
        relate(t, t, "inject")


def test_relate_stepwise():
    t1 = parse_trace("alloc 0 8 -> $x\nstore int32 $x 0 (int 1)")
    t2 = parse_trace("alloc 0 8 -> $y\nstore int32 $y 0 (int 1)")
    r = relate(t1, t2, "lessdef", stepwise=True)
    assert r.ok and len(r.steps) == 2
    short = parse_trace("alloc 0 8 -> $x")
    assert not relate(t1, short, "lessdef", stepwise=True).ok


def _grammar_ops(rng):
    """Random ops expressible in the trace grammar (no probe refs)."""
    ops = []
    for op in sample_ops(rng):
        if op[0] in ("valid", "fresh", "bounds", "free_list"):
            continue
        refs = [op[1]] if op[0] == "free" else [op[2]] if op[0] in ("store", "load") else []
        if any(r < 0 for r in refs):
            continue
        ops.append(op)
    return ops


def _ops_to_trace(ops, outcomes):
    """Render ops as a trace whose expectations are the real outcomes."""
    from blockmem.chunks import value_text

    lines = []
    k = 0
    for op, out in zip(ops, outcomes):
        if op[0] == "alloc":
            line = f"alloc {op[1]} {op[2]} -> $b{k}"
            k += 1
        elif op[0] == "free":
            line = f"free $b{op[1]}"
        elif op[0] == "store":
            line = f"store {op[1].token} $b{op[2]} {op[3]} {value_text(op[4])}"
        else:
            expect = "fail" if out[1] is None else value_text(out[1])
            lines.append(f"load {op[1].token} $b{op[2]} {op[3]} => {expect}")
            continue
        if out[1] in (None, False):
            line = "expect-fail " + line
        lines.append(line)
    return "\n".join(lines)


def test_exec_trace_matches_oracle_observably():
    rng = SplitMix64(505)
    for _ in range(150):
        ops = _grammar_ops(rng)
        main = run_ops(ops)
        _, oracle_outcomes = oracle_exec(ops)
        assert oracle_outcomes == main.outcomes
        text = _ops_to_trace(ops, main.outcomes)
        report = exec_trace(parse_trace(text))
        assert report.ok, (text, report.failure)
