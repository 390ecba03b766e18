"""Relation checkers: spec examples plus agreement with the enumerating
reference versions."""

from blockmem import (
    Chunk,
    Vfloat,
    Vint,
    Vptr,
    VUNDEF,
    alloc,
    empty,
    free,
    mem_extends,
    mem_inject,
    mem_lessdef,
    store,
    val_emb,
    val_lessdef,
    emb_incr,
    emb_no_overlap,
)
from blockmem.lawcheck import oracle
from blockmem.lawcheck.generators import (
    build_emb_scenario,
    build_extends_pair,
    build_lessdef_pair,
    sample_emb_plan,
    sample_extends_plan,
    sample_lessdef_plan,
)
from blockmem.lawcheck.rng import SplitMix64


def test_val_lessdef():
    assert val_lessdef(VUNDEF, Vint(3))
    assert val_lessdef(Vint(3), Vint(3))
    assert not val_lessdef(Vint(3), Vint(4))
    assert not val_lessdef(Vint(3), VUNDEF)


def test_val_emb():
    assert val_emb({}, VUNDEF, Vptr(9, 9))
    assert val_emb({1: (3, 8)}, Vptr(1, 4), Vptr(3, 12))
    assert not val_emb({}, Vptr(1, 0), Vptr(1, 0))
    assert val_emb({}, Vint(2), Vint(2))
    assert not val_emb({}, Vint(2), Vint(3))
    assert not val_emb({1: (3, 8)}, Vptr(1, 4), Vint(12))
    f = Vfloat.from_float(1.5)
    assert val_emb({}, f, f)


def _two_states():
    b, m = alloc(empty(), 0, 8)
    m1 = store(Chunk.INT32, m, b, 0, VUNDEF)
    m2 = store(Chunk.INT32, m, b, 0, Vint(5))
    return b, m, m1, m2


def test_mem_lessdef_examples():
    b, m, m1, m2 = _two_states()
    assert mem_lessdef(m, m)
    assert mem_lessdef(m1, m2)  # undef refines a defined store
    m4 = store(Chunk.INT32, m, b, 0, Vint(4))
    assert not mem_lessdef(m4, m2)
    assert not mem_lessdef(m2, m1)


def test_mem_extends_examples():
    b, m = alloc(empty(), 0, 4)
    bw, mw = alloc(empty(), -4, 8)  # same id, wider bounds
    m_s = store(Chunk.INT8U, m, b, 1, Vint(7))
    mw_s = store(Chunk.INT8U, mw, bw, 1, Vint(7))
    assert mem_extends(m, m)
    assert mem_extends(m_s, mw_s)
    assert not mem_extends(mw_s, m_s)  # bounds shrink
    m_freed = free(m, b)
    assert not mem_extends(m, m_freed)  # block lost on the right


def test_emb_no_overlap_examples():
    _, m = alloc(empty(), 0, 4)
    b2, m = alloc(m, 0, 4)
    assert emb_no_overlap({1: (7, 0), 2: (8, 0)}, m)
    assert emb_no_overlap({1: (7, 0), 2: (7, 8)}, m)
    assert not emb_no_overlap({1: (7, 0), 2: (7, 0)}, m)
    m_freed = free(m, b2)
    assert emb_no_overlap({1: (7, 0), 2: (7, 0)}, m_freed)  # only one valid


def test_mem_inject_examples():
    b, m = alloc(empty(), 0, 8)
    m = store(Chunk.INT32, m, b, 0, Vint(5))
    ident = {b: (b, 0)}
    assert mem_inject(ident, m, m)
    assert not mem_inject({b: (b, 4)}, m, m)  # delta not a multiple of 8
    # relocation by 8 into a wider target
    tb, m2 = alloc(empty(), 8, 16)
    m2 = store(Chunk.INT32, m2, tb, 8, Vint(5))
    assert mem_inject({b: (tb, 8)}, m, m2)


def test_emb_incr():
    e = {1: (2, 0)}
    assert emb_incr(e, e)
    assert emb_incr(e, {1: (2, 0), 3: (4, 8)})
    assert not emb_incr({1: (2, 0)}, {1: (5, 0)})
    assert not emb_incr({1: (2, 0)}, {})


def test_checkers_agree_with_reference_on_pairs():
    rng = SplitMix64(2024)
    for _ in range(150):
        r1, r2, _, _ = build_lessdef_pair(sample_lessdef_plan(rng))
        assert mem_lessdef(r1.state, r2.state) == oracle.ref_mem_lessdef(r1.state, r2.state)
        e1, e2, _, _ = build_extends_pair(sample_extends_plan(rng))
        assert mem_extends(e1.state, e2.state) == oracle.ref_mem_extends(e1.state, e2.state)
        sc = build_emb_scenario(sample_emb_plan(rng, overlap_chance=(1, 4)))
        assert mem_inject(sc.emb, sc.m1, sc.m2) == oracle.ref_mem_inject(
            sc.emb, sc.m1, sc.m2
        )


def test_checkers_agree_with_reference_on_unrelated_states():
    rng = SplitMix64(99)
    from blockmem.lawcheck.generators import sample_ops, run_ops

    for _ in range(150):
        m1 = run_ops(sample_ops(rng)).state
        m2 = run_ops(sample_ops(rng)).state
        assert mem_lessdef(m1, m2) == oracle.ref_mem_lessdef(m1, m2)
        assert mem_extends(m1, m2) == oracle.ref_mem_extends(m1, m2)
        emb = {}
        for b in range(1, m1.nextblock):
            if rng.chance(1, 2):
                emb[b] = (rng.randint(1, max(1, m2.nextblock - 1)), 8 * rng.randint(-1, 2))
        assert mem_inject(emb, m1, m2) == oracle.ref_mem_inject(emb, m1, m2)
