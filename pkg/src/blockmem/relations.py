"""Executable checkers for the four relations between memory states.

Each relation quantifies over loads, which is a finite universe once block
bounds are fixed: all chunks crossed with the aligned in-bounds offsets of
every valid block.  The checkers exploit that a load produces a defined
value only at an offset holding a datum, so the quantification collapses
to a sweep over materialized cells plus per-block bounds checks; the
result is exactly the full enumeration's (see the reference checkers in
the law-suite oracle, which do enumerate and are tested to agree).

An embedding is a partial relocation map ``block -> (target block, byte
delta)``; absent keys are unmapped.  Deltas of an injection must be
multiples of 8 so that relocation preserves every chunk's alignment.
"""

from __future__ import annotations

from functools import lru_cache

from . import cells, chunks, memstate
from .chunks import ALL_CHUNKS, COMPAT_CHUNKS, Chunk, Value, Vptr, VUNDEF
from .memstate import MemState

# Finite map block -> (target block, delta); absent keys are unmapped.
Embedding = dict

DELTA_ALIGNMENT = 8


def val_lessdef(v1: Value, v2: Value) -> bool:
    """Value refinement: undefined refines anything, everything else only
    itself."""
    return v1 == VUNDEF or v1 == v2


def val_emb(emb: Embedding, v1: Value, v2: Value) -> bool:
    """Value relation through an embedding: undefined refines anything,
    integers and floats relate to themselves, and a pointer relates to its
    relocation through ``emb``."""
    if v1 == VUNDEF:
        return True
    if type(v1) is Vptr:
        if type(v2) is not Vptr:
            return False
        target = emb.get(v1.block)
        return (
            target is not None
            and target[0] == v2.block
            and v1.offset + target[1] == v2.offset
        )
    return v1 == v2


def emb_incr(e1: Embedding, e2: Embedding) -> bool:
    """Whether ``e2`` extends ``e1``: every mapping of ``e1`` is present and
    identical in ``e2``."""
    for b, target in e1.items():
        if e2.get(b) != target:
            return False
    return True


def emb_no_overlap(emb: Embedding, m1: MemState) -> bool:
    """No two distinct valid blocks of ``m1`` relocate onto intersecting
    ranges of the same target block.  Empty-span blocks never overlap."""
    by_target: dict[int, list[tuple[int, int]]] = {}
    for b in range(1, m1.nextblock):
        if b in m1.freed:
            continue
        target = emb.get(b)
        if target is None:
            continue
        low, high = m1.bounds_.get(b, (0, 0))
        if low >= high:
            continue
        tb, delta = target
        by_target.setdefault(tb, []).append((low + delta, high + delta))
    for ranges in by_target.values():
        if len(ranges) < 2:
            continue
        ranges.sort()
        for (_, h1), (l2, _) in zip(ranges, ranges[1:]):
            if l2 < h1:
                return False
    return True


@lru_cache(maxsize=4096)
def _access_list(low: int, high: int, aligned: bool) -> tuple[tuple[Chunk, int], ...]:
    """All (chunk, offset) pairs whose footprint fits ``[low, high)``,
    restricted to aligned offsets unless ``aligned`` is False."""
    out = []
    for t in ALL_CHUNKS:
        size = chunks.size_chunk(t)
        step = chunks.align_chunk(t) if aligned else 1
        i = low + (-low) % step
        while i + size <= high:
            out.append((t, i))
            i += step
    return tuple(out)


def valid_accesses(m: MemState, b: int) -> tuple[tuple[Chunk, int], ...]:
    """The finite set of valid (chunk, offset) accesses of block ``b``."""
    if not memstate.valid_block(m, b):
        return ()
    low, high = m.bounds_.get(b, (0, 0))
    return _access_list(low, high, m.config.check_alignment)


def _defined_loads(m: MemState, b: int):
    """Yield every (chunk, offset, value) with a defined (non-undef) load in
    block ``b``.  Defined loads only arise at datum cells, read at a chunk
    of the same size class."""
    c = m.contents.get(b)
    if not c:
        return
    for ofs, datum in c.items():
        for t in COMPAT_CHUNKS[datum.chunk]:
            if memstate.valid_access(m, t, b, ofs):
                v = cells.load_contents(t, c, ofs)
                if v != VUNDEF:
                    yield t, ofs, v


def mem_lessdef(m1: MemState, m2: MemState) -> bool:
    """Pointwise refinement: same domain, and every valid load of ``m1`` is
    refined by the load of ``m2`` at the same location."""
    if not memstate.same_domain(m1, m2):
        return False
    for b in range(1, m1.nextblock):
        if b in m1.freed:
            continue
        c2 = m2.contents.get(b, cells.EMPTY_CONTENTS)
        if m1.contents.get(b) == c2:
            continue
        for t, ofs, v1 in _defined_loads(m1, b):
            if v1 != cells.load_contents(t, c2, ofs):
                return False
    return True


def mem_extends(m1: MemState, m2: MemState) -> bool:
    """Memory extension: same next block, every block valid in ``m1`` is
    valid in ``m2`` with containing bounds, and loads are preserved up to
    refinement at the same locations."""
    if m1.nextblock != m2.nextblock:
        return False
    for b in range(1, m1.nextblock):
        if b in m1.freed:
            continue
        if not memstate.valid_block(m2, b):
            return False
        low1, high1 = m1.bounds_.get(b, (0, 0))
        low2, high2 = m2.bounds_.get(b, (0, 0))
        if not (low2 <= low1 and high1 <= high2):
            return False
        c2 = m2.contents.get(b, cells.EMPTY_CONTENTS)
        if m1.contents.get(b) == c2:
            continue
        for t, ofs, v1 in _defined_loads(m1, b):
            if v1 != cells.load_contents(t, c2, ofs):
                return False
    return True


def mem_emb(emb: Embedding, m1: MemState, m2: MemState) -> bool:
    """Load transport through an embedding: every valid access of a mapped
    block of ``m1`` is valid at its relocated location in ``m2``, and the
    loaded values relate by ``val_emb``.  Unmapped blocks impose nothing."""
    for b1 in range(1, m1.nextblock):
        if b1 in m1.freed:
            continue
        target = emb.get(b1)
        if target is None:
            continue
        accesses = valid_accesses(m1, b1)
        if not accesses:
            continue
        b2, delta = target
        low1, high1 = m1.bounds_[b1]
        low2, high2 = memstate.bounds(m2, b2)
        if (
            memstate.valid_block(m2, b2)
            and delta % DELTA_ALIGNMENT == 0
            and low2 <= low1 + delta
            and high1 + delta <= high2
        ):
            pass  # every relocated access is valid in m2
        else:
            for t, i in accesses:
                if not memstate.valid_access(m2, t, b2, i + delta):
                    return False
        c2 = m2.contents.get(b2, cells.EMPTY_CONTENTS)
        for t, ofs, v1 in _defined_loads(m1, b1):
            if not val_emb(emb, v1, cells.load_contents(t, c2, ofs + delta)):
                return False
    return True


def mem_inject(emb: Embedding, m1: MemState, m2: MemState) -> bool:
    """Memory injection: load transport plus the two side conditions that
    make relocation sound, namely non-overlapping images and deltas that
    preserve every chunk's alignment."""
    for _, delta in emb.values():
        if delta % DELTA_ALIGNMENT != 0:
            return False
    if not emb_no_overlap(emb, m1):
        return False
    return mem_emb(emb, m1, m2)
