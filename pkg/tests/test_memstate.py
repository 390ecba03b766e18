"""States and the four operations: success conditions and bookkeeping."""

from blockmem import (
    CapacityPolicy,
    Chunk,
    MemConfig,
    Vint,
    Vptr,
    VUNDEF,
    alloc,
    alloc_list,
    bounds,
    empty,
    free,
    free_list,
    fresh_block,
    load,
    loadv,
    same_domain,
    store,
    storev,
    valid_access,
    valid_block,
)

CAP4 = MemConfig(capacity=CapacityPolicy(max_total_bytes=4))


def _one_block(low=0, high=8):
    b, m = alloc(empty(), low, high)
    return b, m


def test_empty_state():
    m = empty()
    assert m.nextblock == 1
    assert not valid_block(m, 1)
    assert load(Chunk.INT32, m, 1, 0) is None
    assert empty() == empty()


def test_alloc_basics():
    b, m = alloc(empty(), 0, 8)
    assert b == 1 and m.nextblock == 2
    assert bounds(m, 1) == (0, 8)
    assert alloc(empty(CAP4), 0, 8) is None
    assert alloc(empty(CAP4), 0, 4) is not None


def test_alloc_negative_and_empty_spans():
    b, m = alloc(empty(), -4, 12)
    assert bounds(m, b) == (-4, 12)
    b2, m2 = alloc(m, 5, 1)  # low > high: empty block
    assert valid_block(m2, b2)
    assert not valid_access(m2, Chunk.INT8U, b2, 5)
    assert m2.allocated_bytes == 16


def test_free_basics():
    b, m = _one_block()
    m2 = free(m, b)
    assert m2 is not None and not valid_block(m2, b)
    assert free(empty(), 1) is None
    assert bounds(m2, b) == bounds(m, b)
    assert free(m2, b) is None  # double free


def test_capacity_accounting_allows_reuse():
    cfg = MemConfig(capacity=CapacityPolicy(max_total_bytes=8))
    b, m = alloc(empty(cfg), 0, 8)
    assert alloc(m, 0, 8) is None
    m = free(m, b)
    assert m.allocated_bytes == 0
    b2, m = alloc(m, 0, 8)
    assert b2 == 2  # ids never reused


def test_load_store_roundtrip():
    b, m = _one_block()
    m = store(Chunk.INT32, m, b, 0, Vint(42))
    assert load(Chunk.INT32, m, b, 0) == Vint(42)


def test_load_fresh_block_is_undef():
    b, m = _one_block()
    assert load(Chunk.INT32, m, b, 4) == VUNDEF


def test_load_misaligned_fails():
    b, m = _one_block()
    assert load(Chunk.INT32, m, b, 1) is None


def test_alignment_can_be_disabled():
    cfg = MemConfig(check_alignment=False)
    b, m = alloc(empty(cfg), 0, 8)
    assert valid_access(m, Chunk.INT32, b, 1)
    m2 = store(Chunk.INT32, m, b, 1, Vint(9))
    assert load(Chunk.INT32, m2, b, 1) == Vint(9)


def test_store_failures():
    b, m = _one_block()
    assert store(Chunk.INT32, m, b, 0, Vint(1)) is not None
    assert store(Chunk.INT32, m, b, 6, Vint(1)) is None  # 6 + 4 > 8
    assert store(Chunk.INT32, empty(), 1, 0, Vint(1)) is None


def test_valid_and_fresh():
    m0 = empty()
    assert fresh_block(m0, 1)
    b, m = alloc(m0, 0, 4)
    assert valid_block(m, b) and not fresh_block(m, b)
    m2 = free(m, b)
    assert not valid_block(m2, b) and not fresh_block(m2, b)
    for probe in (0, 1, 2, 5):
        assert not (fresh_block(m, probe) and valid_block(m, probe))


def test_bounds_defaults_and_stability():
    assert bounds(empty(), 7) == (0, 0)
    b, m = _one_block()
    m2 = store(Chunk.INT8U, m, b, 3, Vint(1))
    assert bounds(m2, b) == bounds(m, b)
    b2, m3 = alloc(m2, -4, 4)
    assert bounds(m3, b) == (0, 8)


def test_valid_access_examples():
    b, m = _one_block()
    assert valid_access(m, Chunk.INT32, b, 4)
    assert valid_access(m, Chunk.FLOAT64, b, 0)
    b7, m7 = alloc(empty(), 0, 7)
    assert not valid_access(m7, Chunk.FLOAT64, b7, 0)
    m_freed = free(m, b)
    assert not valid_access(m_freed, Chunk.INT8U, b, 0)


def test_same_domain():
    b, m = _one_block()
    assert same_domain(m, m)
    m2 = store(Chunk.INT32, m, b, 0, Vint(3))
    assert same_domain(m, m2)
    _, m3 = alloc(m, 0, 4)
    assert not same_domain(m, m3)


def test_free_list():
    b, m = _one_block()
    assert free_list(m, []) == m
    assert free_list(m, [b, b]) is None
    b2, m2 = alloc(m, 0, 4)
    both = free_list(m2, [b, b2])
    assert both == free(free(m2, b), b2)


def test_alloc_list():
    assert alloc_list(empty(), []) == ([], empty())
    bs, m = alloc_list(empty(), [(0, 4), (0, 4)])
    assert bs == [1, 2] and m.nextblock == 3
    head = alloc(empty(), 0, 4)
    b, m1 = head
    rest = alloc_list(m1, [(0, 4)])
    assert alloc_list(empty(), [(0, 4), (0, 4)]) == ([b] + rest[0], rest[1])


def test_loadv_storev():
    b, m = _one_block()
    assert loadv(Chunk.INT32, m, VUNDEF) is None
    assert storev(Chunk.INT32, m, Vint(3), Vint(1)) is None
    m2 = storev(Chunk.INT32, m, Vptr(b, 0), Vint(5))
    assert m2 == store(Chunk.INT32, m, b, 0, Vint(5))
    assert loadv(Chunk.INT32, m2, Vptr(b, 0)) == load(Chunk.INT32, m2, b, 0) == Vint(5)


def test_store_changes_only_target_contents():
    b1, m = alloc(empty(), 0, 8)
    b2, m = alloc(m, 0, 8)
    m = store(Chunk.INT32, m, b1, 0, Vint(1))
    m2 = store(Chunk.INT32, m, b2, 4, Vint(2))
    assert m2.contents[b1] == m.contents[b1]
    assert m2.nextblock == m.nextblock
    assert m2.freed == m.freed
    assert m2.bounds_ == m.bounds_
