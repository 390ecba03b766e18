"""Memory states and the four memory operations.

A state is a collection of isolated blocks: a monotone next-block counter,
per-block bounds, the set of freed blocks, and per-block content maps.
Block ids are never reused; freeing a block records it in ``freed`` and
keeps its bounds, so bounds queries are stable across the block's whole
lifetime.  Byte accounting (``allocated_bytes``) backs the capacity policy
and is a function of bounds and freed, which keeps allocation outcomes
deterministic in the domain of the state.

States are immutable values: every operation returns a new state, and the
partial operations (alloc, free, load, store and their derived forms)
signal failure by returning ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import cells, chunks
from .cells import EMPTY_CONTENTS
from .chunks import Chunk, Value, Vptr

Bounds = tuple[int, int]


@dataclass(frozen=True, slots=True)
class CapacityPolicy:
    """Byte-budget admission policy for alloc; ``None`` means unlimited.

    Deterministic in (bytes currently allocated, requested span), so two
    states with the same domain make identical allocation decisions.
    """

    max_total_bytes: int | None = None

    def admits(self, allocated_bytes: int, request: int) -> bool:
        limit = self.max_total_bytes
        return limit is None or allocated_bytes + request <= limit


@dataclass(frozen=True, slots=True)
class MemConfig:
    """Model-wide knobs: the capacity policy and whether the valid-access
    relation includes the alignment conjunct."""

    capacity: CapacityPolicy = CapacityPolicy()
    check_alignment: bool = True


DEFAULT_CONFIG = MemConfig()


@dataclass(frozen=True, slots=True)
class MemState:
    nextblock: int
    bounds_: dict
    freed: frozenset
    contents: dict
    allocated_bytes: int
    config: MemConfig


def _span(low: int, high: int) -> int:
    return high - low if high > low else 0


def empty(config: MemConfig = DEFAULT_CONFIG) -> MemState:
    """The initial memory state: no blocks, next id 1."""
    return MemState(1, {}, frozenset(), {}, 0, config)


def valid_block(m: MemState, b: int) -> bool:
    """Allocated and not yet freed."""
    return 1 <= b < m.nextblock and b not in m.freed


def fresh_block(m: MemState, b: int) -> bool:
    """Id not issued yet; mutually exclusive with validity."""
    return b >= m.nextblock


def bounds(m: MemState, b: int) -> Bounds:
    """(low inclusive, high exclusive) of ``b``; (0, 0) off-domain."""
    return m.bounds_.get(b, (0, 0))


def valid_access(m: MemState, t: Chunk, b: int, i: int) -> bool:
    """Whether an access at chunk ``t`` to ``(b, i)`` is legal: valid block,
    footprint within bounds, and (unless disabled) aligned address."""
    if not valid_block(m, b):
        return False
    low, high = m.bounds_.get(b, (0, 0))
    if i < low or i + chunks.size_chunk(t) > high:
        return False
    return not m.config.check_alignment or i % chunks.align_chunk(t) == 0


def alloc(m: MemState, low: int, high: int) -> tuple[int, MemState] | None:
    """Allocate a fresh block with the given bounds.

    ``low > high`` is permitted and yields an empty-span block with no
    valid accesses.  Fails exactly when the capacity policy rejects the
    requested span.
    """
    request = _span(low, high)
    if not m.config.capacity.admits(m.allocated_bytes, request):
        return None
    b = m.nextblock
    bounds2 = dict(m.bounds_)
    bounds2[b] = (low, high)
    contents2 = dict(m.contents)
    contents2[b] = EMPTY_CONTENTS
    return b, MemState(
        b + 1, bounds2, m.freed, contents2, m.allocated_bytes + request, m.config
    )


def free(m: MemState, b: int) -> MemState | None:
    """Deallocate ``b``.  Fails unless ``b`` is currently valid; bounds and
    contents are kept so off-domain queries stay stable."""
    if not valid_block(m, b):
        return None
    low, high = m.bounds_[b]
    return replace(
        m, freed=m.freed | {b}, allocated_bytes=m.allocated_bytes - _span(low, high)
    )


def load(t: Chunk, m: MemState, b: int, i: int) -> Value | None:
    """Read chunk ``t`` at ``(b, i)``.  Succeeds iff the access is valid;
    the result may still be ``Vundef`` (never-written or clobbered cell)."""
    if not valid_access(m, t, b, i):
        return None
    return cells.load_contents(t, m.contents.get(b, EMPTY_CONTENTS), i)


def store(t: Chunk, m: MemState, b: int, i: int, v: Value) -> MemState | None:
    """Write ``v`` as chunk ``t`` at ``(b, i)``.  Succeeds iff the access is
    valid; only ``contents[b]`` changes."""
    if not valid_access(m, t, b, i):
        return None
    contents2 = dict(m.contents)
    contents2[b] = cells.store_contents(m.contents.get(b, EMPTY_CONTENTS), t, i, v)
    return replace(m, contents=contents2)


def same_domain(m1: MemState, m2: MemState) -> bool:
    """Equal next-block counter, freed set, and bounds; contents may
    differ."""
    return (
        m1.nextblock == m2.nextblock
        and m1.freed == m2.freed
        and m1.bounds_ == m2.bounds_
    )


def free_list(m: MemState, bs) -> MemState | None:
    """Free blocks left to right; fails at the first invalid element (so a
    duplicate fails on its second occurrence)."""
    for b in bs:
        m2 = free(m, b)
        if m2 is None:
            return None
        m = m2
    return m


def alloc_list(m: MemState, requests) -> tuple[list[int], MemState] | None:
    """Allocate one block per (low, high) request, left to right, returning
    the new block ids in order; fails if any allocation fails."""
    out: list[int] = []
    for low, high in requests:
        r = alloc(m, low, high)
        if r is None:
            return None
        b, m = r
        out.append(b)
    return out, m


def loadv(t: Chunk, m: MemState, addr: Value) -> Value | None:
    """Value-addressed load: delegates when ``addr`` is a pointer, fails
    otherwise."""
    if type(addr) is Vptr:
        return load(t, m, addr.block, addr.offset)
    return None


def storev(t: Chunk, m: MemState, addr: Value, v: Value) -> MemState | None:
    """Value-addressed store: delegates when ``addr`` is a pointer, fails
    otherwise."""
    if type(addr) is Vptr:
        return store(t, m, addr.block, addr.offset, v)
    return None
