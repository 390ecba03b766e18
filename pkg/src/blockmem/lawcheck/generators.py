"""Scenario generation for the law suite.

Scenarios are flat operation lists in the trace vocabulary (alloc, free,
free-list, store, load, plus validity/bounds/freshness queries); they are
the only way states are built, so every generated state is reachable and
satisfies the structural invariants by construction.  Blocks are referred
to by allocation order (ref ``k`` is the k-th alloc of the scenario),
which keeps scenarios meaningful under shrinking; two reserved refs probe
an always-invalid and an always-fresh block id.

Besides single states, this module constructs *related pairs*: two
scenarios replayed in lockstep whose final states satisfy one of the
memory relations by construction (refinement, extension, or an embedding
with its relocation map).  The relation laws draw their hypothesis
instances from these constructors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .. import chunks, memstate, relations
from ..chunks import ALL_CHUNKS, Chunk, Value, Vfloat, Vint, Vptr, VUNDEF
from ..memstate import DEFAULT_CONFIG, MemConfig, MemState
from .rng import SplitMix64

PROBE_INVALID = -1  # resolves to block 0, never allocatable
PROBE_FRESH = -2  # resolves to a far-away id, fresh in small scenarios
_FRESH_ID = 1_000_000


def resolve_ref(ref: int, blocks) -> int:
    """Map a scenario block ref to a concrete block id."""
    if 0 <= ref < len(blocks):
        return blocks[ref]
    if ref == PROBE_FRESH:
        return _FRESH_ID
    return 0


@dataclass
class RunResult:
    state: MemState
    blocks: list
    outcomes: list


def run_ops(ops, config: MemConfig = DEFAULT_CONFIG) -> RunResult:
    """Replay a scenario on the real model, recording one observable
    outcome per operation."""
    m = memstate.empty(config)
    blocks: list[int] = []
    outcomes = []
    for op in ops:
        kind = op[0]
        if kind == "alloc":
            r = memstate.alloc(m, op[1], op[2])
            if r is None:
                outcomes.append(("alloc", None))
            else:
                b, m = r
                blocks.append(b)
                outcomes.append(("alloc", b))
        elif kind == "free":
            m2 = memstate.free(m, resolve_ref(op[1], blocks))
            if m2 is not None:
                m = m2
            outcomes.append(("free", m2 is not None))
        elif kind == "free_list":
            ids = [resolve_ref(r, blocks) for r in op[1]]
            m2 = memstate.free_list(m, ids)
            if m2 is not None:
                m = m2
            outcomes.append(("free_list", m2 is not None))
        elif kind == "store":
            m2 = memstate.store(op[1], m, resolve_ref(op[2], blocks), op[3], op[4])
            if m2 is not None:
                m = m2
            outcomes.append(("store", m2 is not None))
        elif kind == "load":
            outcomes.append(
                ("load", memstate.load(op[1], m, resolve_ref(op[2], blocks), op[3]))
            )
        elif kind == "valid":
            outcomes.append(("valid", memstate.valid_block(m, resolve_ref(op[1], blocks))))
        elif kind == "fresh":
            outcomes.append(("fresh", memstate.fresh_block(m, resolve_ref(op[1], blocks))))
        elif kind == "bounds":
            outcomes.append(("bounds", memstate.bounds(m, resolve_ref(op[1], blocks))))
        else:
            raise ValueError(f"unknown op {kind!r}")
    return RunResult(m, blocks, outcomes)


def format_ops(ops) -> str:
    """Render a scenario as trace-format lines (queries as comments)."""
    lines = []
    k = 0
    for op in ops:
        kind = op[0]
        if kind == "alloc":
            lines.append(f"alloc {op[1]} {op[2]} -> $b{k}")
            k += 1
        elif kind == "free":
            lines.append(f"free {_ref_text(op[1])}")
        elif kind == "free_list":
            lines.append("free-list " + " ".join(_ref_text(r) for r in op[1]))
        elif kind == "store":
            lines.append(
                f"store {op[1].token} {_ref_text(op[2])} {op[3]} {chunks.value_text(op[4])}"
            )
        elif kind == "load":
            lines.append(f"# load {op[1].token} {_ref_text(op[2])} {op[3]}")
        else:
            lines.append(f"# query {kind} {_ref_text(op[1])}")
    return "\n".join(lines)


def _ref_text(ref: int) -> str:
    if ref == PROBE_INVALID:
        return "$invalid"
    if ref == PROBE_FRESH:
        return "$fresh"
    return f"$b{ref}"


# --- random scenarios --------------------------------------------------------


@dataclass(frozen=True)
class UniverseConfig:
    """Bounds on the random scenario universe."""

    max_blocks: int = 3
    min_ops: int = 0
    max_ops: int = 8
    lo_min: int = -8
    lo_max: int = 8
    spans: tuple = (0, 1, 2, 4, 8, 8, 12, 16)
    mem_config: MemConfig = DEFAULT_CONFIG


DEFAULT_UNIVERSE = UniverseConfig()

FLOAT_POOL = tuple(
    Vfloat.from_float(x)
    for x in (
        0.0,
        -0.0,
        1.0,
        1.5,
        -2.75,
        0.1,
        3.5e38,  # overflows single precision
        1e-40,  # single subnormal range
        5e-324,  # double subnormal, rounds to zero
        float("inf"),
        float("-inf"),
        float("nan"),
    )
)
_WILD_INTS = (300, -300, 70000, 2**31, -(2**31) - 5, 2**40)


def sample_value(rng: SplitMix64, live_ids=()) -> Value:
    r = rng.below(10)
    if r < 2:
        return VUNDEF
    if r < 5:
        return Vint(rng.randint(-8, 8))
    if r < 6:
        return Vint(rng.choice(_WILD_INTS))
    if r < 8:
        return Vfloat(rng.choice(FLOAT_POOL).bits)
    if live_ids:
        return Vptr(rng.choice(live_ids), rng.randint(-4, 8))
    return Vint(rng.randint(-8, 8))


def _aligned_slot(rng: SplitMix64, low: int, high: int, t: Chunk):
    """A valid aligned offset for ``t`` within [low, high), or None."""
    size, align = chunks.size_chunk(t), chunks.align_chunk(t)
    first = low + (-low) % align
    last = high - size
    if first > last:
        return None
    return first + align * rng.below((last - first) // align + 1)


def _pick_store(rng: SplitMix64, planned):
    """(index, chunk, offset) for a store that will succeed, or None."""
    alive = [k for k, p in enumerate(planned) if p[2] and p[1] - p[0] >= 1]
    if not alive:
        return None
    for _ in range(4):
        k = rng.choice(alive)
        low, high, _ = planned[k]
        t = rng.choice(ALL_CHUNKS)
        i = _aligned_slot(rng, low, high, t)
        if i is not None:
            return k, t, i
    k = rng.choice(alive)
    return k, Chunk.INT8U, planned[k][0]


def sample_ops(rng: SplitMix64, u: UniverseConfig = DEFAULT_UNIVERSE) -> list:
    """A random scenario: allocs, mostly-valid stores, frees, and a few
    deliberately invalid probes."""
    ops = []
    planned = []  # [low, high, alive]
    live_ids = []
    n = rng.randint(u.min_ops, u.max_ops)
    for _ in range(n):
        r = rng.below(12)
        if r < 4 and len(planned) < u.max_blocks:
            low = rng.randint(u.lo_min, u.lo_max)
            if rng.chance(1, 12):
                high = low - rng.below(3)  # empty-span block
            else:
                high = low + rng.choice(u.spans)
            ops.append(("alloc", low, high))
            planned.append([low, high, True])
            live_ids.append(len(planned))  # ids are 1-based allocation order
        elif r < 8 and planned:
            slot = _pick_store(rng, planned)
            if slot is None:
                continue
            k, t, i = slot
            v = sample_value(rng, tuple(live_ids))
            if rng.chance(1, 10):
                i += rng.choice((-1, 1, 3))  # misaligned / out-of-bounds probe
            ops.append(("store", t, k, i, v))
        elif r < 9 and planned:
            alive = [k for k, p in enumerate(planned) if p[2]]
            if alive and rng.chance(3, 4):
                k = rng.choice(alive)
                planned[k][2] = False
                if (k + 1) in live_ids:
                    live_ids.remove(k + 1)
                ops.append(("free", k))
            else:
                ops.append(("free", rng.choice((PROBE_INVALID, PROBE_FRESH))))
        else:
            ref = rng.below(len(planned)) if planned and rng.chance(5, 6) else PROBE_INVALID
            q = rng.below(4)
            if q == 0:
                t = rng.choice(ALL_CHUNKS)
                ops.append(("load", t, ref, rng.randint(-6, 8)))
            elif q == 1:
                ops.append(("valid", ref))
            elif q == 2:
                ops.append(("bounds", ref))
            else:
                ops.append(("fresh", ref))
    return ops


def gen_state(seed: int, cfg: UniverseConfig = DEFAULT_UNIVERSE) -> MemState:
    """A reachable random state, reproducible from the seed alone."""
    rng = SplitMix64(seed)
    return run_ops(sample_ops(rng, cfg), cfg.mem_config).state


def sample_state(rng: SplitMix64, u: UniverseConfig = DEFAULT_UNIVERSE):
    ops = sample_ops(rng, u)
    return ops, run_ops(ops, u.mem_config)


def sample_valid_access(rng: SplitMix64, m: MemState):
    """A (chunk, block, offset) access valid in ``m``, or None."""
    candidates = [
        b
        for b in range(1, m.nextblock)
        if b not in m.freed and relations.valid_accesses(m, b)
    ]
    if not candidates:
        return None
    b = rng.choice(candidates)
    t, i = rng.choice(relations.valid_accesses(m, b))
    return t, b, i


def sample_access_probe(rng: SplitMix64, m: MemState):
    """An arbitrary (chunk, block, offset), valid or not."""
    t = rng.choice(ALL_CHUNKS)
    b = rng.choice((0, 1, 2, 3, m.nextblock, m.nextblock + 2))
    return t, b, rng.randint(-6, 9)


# --- shrinking ---------------------------------------------------------------


def shrink_ops(ops):
    """Smaller scenario candidates: drop one op (cascading refs when an
    alloc goes away), or simplify one stored value."""
    alloc_positions = [k for k, op in enumerate(ops) if op[0] == "alloc"]
    for k in range(len(ops) - 1, -1, -1):
        op = ops[k]
        if op[0] != "alloc":
            yield ops[:k] + ops[k + 1 :]
            continue
        a = alloc_positions.index(k)
        out = []
        for j, other in enumerate(ops):
            if j == k:
                continue
            out.append(_shift_refs(other, a))
        yield [op for op in out if op is not None]
    for k, op in enumerate(ops):
        if op[0] == "store" and op[4] != VUNDEF:
            yield ops[:k] + [(op[0], op[1], op[2], op[3], VUNDEF)] + ops[k + 1 :]


def _shift_refs(op, dropped: int):
    """Rewrite an op after alloc number ``dropped`` was removed; None means
    the op depended on it and must go too."""

    def shift(ref):
        if ref < 0:
            return ref
        if ref == dropped:
            return None
        return ref - 1 if ref > dropped else ref

    kind = op[0]
    if kind == "alloc":
        return op
    if kind in ("free", "valid", "fresh", "bounds"):
        r = shift(op[1])
        return None if r is None else (kind, r)
    if kind == "free_list":
        rs = [shift(r) for r in op[1]]
        return None if any(r is None for r in rs) else (kind, tuple(rs))
    if kind == "store":
        r = shift(op[2])
        return None if r is None else (kind, op[1], r, op[3], op[4])
    if kind == "load":
        r = shift(op[2])
        return None if r is None else (kind, op[1], r, op[3])
    return op


# --- refinement pairs --------------------------------------------------------
#
# A lessdef plan is a shared scenario where each store carries two values,
# the left one either equal to the right or undefined.  Replaying the two
# projections yields states with equal domains whose loads refine.


def sample_lessdef_plan(rng: SplitMix64):
    steps = []
    planned = []
    for _ in range(rng.randint(1, 7)):
        r = rng.below(10)
        if r < 4 and len(planned) < 3:
            low = rng.randint(-6, 4)
            high = low + rng.choice((2, 4, 8, 8, 12))
            steps.append(("alloc", low, high))
            planned.append([low, high, True])
        elif r < 9 and planned:
            slot = _pick_store(rng, planned)
            if slot is None:
                continue
            k, t, i = slot
            live = tuple(j + 1 for j, p in enumerate(planned) if p[2])
            v2 = sample_value(rng, live)
            v1 = VUNDEF if rng.chance(2, 5) else v2
            steps.append(("store2", t, k, i, v1, v2))
        elif planned:
            alive = [k for k, p in enumerate(planned) if p[2]]
            if alive:
                k = rng.choice(alive)
                planned[k][2] = False
                steps.append(("free", k))
    return tuple(steps)


def build_lessdef_pair(plan, config: MemConfig = DEFAULT_CONFIG):
    ops1, ops2 = [], []
    for st in plan:
        if st[0] == "store2":
            _, t, k, i, v1, v2 = st
            ops1.append(("store", t, k, i, v1))
            ops2.append(("store", t, k, i, v2))
        else:
            ops1.append(st)
            ops2.append(st)
    return run_ops(ops1, config), run_ops(ops2, config), ops1, ops2


def shrink_lessdef_plan(plan):
    alloc_idx = [k for k, st in enumerate(plan) if st[0] == "alloc"]
    for k in range(len(plan) - 1, -1, -1):
        st = plan[k]
        if st[0] != "alloc":
            yield plan[:k] + plan[k + 1 :]
            continue
        a = alloc_idx.index(k)
        out = []
        ok = True
        for j, other in enumerate(plan):
            if j == k:
                continue
            if other[0] == "alloc":
                out.append(other)
                continue
            ref = other[2] if other[0] == "store2" else other[1]
            if ref == a:
                continue
            ref2 = ref - 1 if ref > a else ref
            if other[0] == "store2":
                out.append((other[0], other[1], ref2, other[3], other[4], other[5]))
            else:
                out.append((other[0], ref2))
        if ok:
            yield tuple(out)


# --- extension pairs ---------------------------------------------------------
#
# An extends plan allocates each block with wider bounds on the right-hand
# side and may add right-only stores whose footprints stay inside the
# widened margin, outside the left block's bounds.


def sample_extends_plan(rng: SplitMix64):
    steps = []
    planned = []  # [low, high, dl, dh, alive]
    for _ in range(rng.randint(1, 7)):
        r = rng.below(12)
        if r < 4 and len(planned) < 3:
            low = rng.randint(-6, 4)
            high = low + rng.choice((0, 2, 4, 8, 8))
            dl = rng.choice((0, 0, 4, 8))
            dh = rng.choice((0, 0, 4, 8))
            steps.append(("alloc", low, high, dl, dh))
            planned.append([low, high, dl, dh, True])
        elif r < 8 and planned:
            slot = _pick_store(rng, [(p[0], p[1], p[4]) for p in planned])
            if slot is None:
                continue
            k, t, i = slot
            live = tuple(j + 1 for j, p in enumerate(planned) if p[4])
            steps.append(("store", t, k, i, sample_value(rng, live)))
        elif r < 10 and planned:
            margins = [
                (k, p)
                for k, p in enumerate(planned)
                if p[4] and (p[2] > 0 or p[3] > 0)
            ]
            if not margins:
                continue
            k, p = rng.choice(margins)
            low, high, dl, dh, _ = p
            side_high = dh > 0 and (dl == 0 or rng.chance(1, 2))
            t = rng.choice(ALL_CHUNKS)
            if side_high:
                i = _aligned_slot(rng, high, high + dh, t)
            else:
                i = _aligned_slot(rng, low - dl, low, t)
            if i is None:
                continue
            steps.append(("margin", t, k, i, sample_value(rng, ())))
        elif planned:
            alive = [k for k, p in enumerate(planned) if p[4]]
            if alive:
                k = rng.choice(alive)
                planned[k][4] = False
                steps.append(("free", k))
    return tuple(steps)


def build_extends_pair(plan, config: MemConfig = DEFAULT_CONFIG):
    ops1, ops2 = [], []
    for st in plan:
        if st[0] == "alloc":
            _, low, high, dl, dh = st
            ops1.append(("alloc", low, high))
            ops2.append(("alloc", low - dl, high + dh))
        elif st[0] == "margin":
            ops2.append(("store", st[1], st[2], st[3], st[4]))
        else:
            ops1.append(st)
            ops2.append(st)
    return run_ops(ops1, config), run_ops(ops2, config), ops1, ops2


def shrink_extends_plan(plan):
    for k in range(len(plan) - 1, -1, -1):
        if plan[k][0] != "alloc":
            yield plan[:k] + plan[k + 1 :]


# --- embedding scenarios ------------------------------------------------------


@dataclass(frozen=True)
class EmbPlan:
    """Recipe for a pair of states related through an embedding.

    Sources are the left-hand blocks; each is unmapped, relocated into a
    private target block at a fixed delta, or packed into one shared
    target at staggered slots.  Stores replay through the relocation map;
    frees apply to the left state only.  With ``overlap`` set the packed
    slots all start at the same base, producing images that intersect.
    """

    sources: tuple  # (low, high, kind); kind: ("none",) | ("own", delta) | ("slot",)
    frees: tuple = ()  # source indexes, freed left-only after the stores
    stores: tuple = ()  # (src_idx, chunk, ofs, vspec)
    extra_targets: tuple = ()  # (low, high) right-only blocks
    extra_stores: tuple = ()  # (extra_idx, chunk, ofs, vspec)
    overlap: bool = False
    hole_span: int = 0  # unmapped gap reserved inside the packed target


@dataclass
class EmbScenario:
    m1: MemState
    m2: MemState
    emb: dict
    src_ids: tuple
    own_pairs: tuple  # (src_id, tgt_id, delta) for sole-source targets
    big_target: int | None
    hole: tuple | None  # (tgt_id, start, span)
    extra_ids: tuple
    ops1: tuple
    ops2: tuple


def _ceil8(x: int) -> int:
    return x + (-x) % 8


def _realize(vspec, src_ids) -> Value:
    kind = vspec[0]
    if kind == "int":
        return Vint(vspec[1])
    if kind == "float":
        return Vfloat(vspec[1])
    if kind == "ptr":
        return Vptr(src_ids[vspec[1]], vspec[2])
    return VUNDEF


def _transport(vspec, src_ids, emb) -> Value:
    if vspec[0] == "ptr":
        tb, delta = emb[src_ids[vspec[1]]]
        return Vptr(tb, vspec[2] + delta)
    return _realize(vspec, src_ids)


def build_emb_scenario(plan: EmbPlan, config: MemConfig = DEFAULT_CONFIG) -> EmbScenario:
    n = len(plan.sources)
    src_ids = tuple(range(1, n + 1))

    # Pack slot sources into the shared target.
    slot_delta: dict[int, int] = {}
    cursor = 0
    for idx, (low, high, kind) in enumerate(plan.sources):
        if kind[0] != "slot":
            continue
        delta = _ceil8((0 if plan.overlap else cursor) - low)
        slot_delta[idx] = delta
        if high > low:
            cursor = _ceil8(max(cursor, high + delta))
    hole = None
    hole_start = cursor
    if plan.hole_span:
        cursor = _ceil8(cursor + plan.hole_span)
    have_big = bool(slot_delta) or plan.hole_span > 0

    # Right-hand allocation order: big target, own targets, extras.
    ops2 = []
    next_tgt = 1
    big_target = None
    if have_big:
        ops2.append(("alloc", 0, cursor))
        big_target = next_tgt
        next_tgt += 1
        if plan.hole_span:
            hole = (big_target, hole_start, plan.hole_span)
    own_pairs = []
    emb: dict[int, tuple[int, int]] = {}
    tgt_ref: dict[int, int] = {}  # source idx -> ref of its target in ops2
    for idx, (low, high, kind) in enumerate(plan.sources):
        if kind[0] == "own":
            delta = kind[1]
            ops2.append(("alloc", low + delta, high + delta))
            emb[src_ids[idx]] = (next_tgt, delta)
            own_pairs.append((src_ids[idx], next_tgt, delta))
            tgt_ref[idx] = next_tgt - 1
            next_tgt += 1
        elif kind[0] == "slot":
            emb[src_ids[idx]] = (big_target, slot_delta[idx])
            tgt_ref[idx] = big_target - 1
    extra_ids = []
    extra_ref_base = next_tgt - 1
    for low, high in plan.extra_targets:
        ops2.append(("alloc", low, high))
        extra_ids.append(next_tgt)
        next_tgt += 1

    ops1 = [("alloc", low, high) for (low, high, _) in plan.sources]
    for src_idx, t, ofs, vspec in plan.stores:
        ops1.append(("store", t, src_idx, ofs, _realize(vspec, src_ids)))
        if src_ids[src_idx] in emb:
            _, delta = emb[src_ids[src_idx]]
            ops2.append(
                ("store", t, tgt_ref[src_idx], ofs + delta, _transport(vspec, src_ids, emb))
            )
    for extra_idx, t, ofs, vspec in plan.extra_stores:
        ops2.append(("store", t, extra_ref_base + extra_idx, ofs, _realize(vspec, src_ids)))
    for src_idx in plan.frees:
        ops1.append(("free", src_idx))

    r1 = run_ops(ops1, config)
    r2 = run_ops(ops2, config)
    return EmbScenario(
        m1=r1.state,
        m2=r2.state,
        emb=emb,
        src_ids=src_ids,
        own_pairs=tuple(own_pairs),
        big_target=big_target,
        hole=hole,
        extra_ids=tuple(extra_ids),
        ops1=tuple(ops1),
        ops2=tuple(ops2),
    )


def sample_emb_plan(
    rng: SplitMix64,
    *,
    overlap_chance: tuple[int, int] = (0, 1),
    hole_span: int = 0,
    need_mapped: bool = False,
) -> EmbPlan:
    while True:
        sources = []
        for _ in range(rng.randint(1, 3)):
            low = rng.choice((-8, -4, 0, 0, 4))
            high = low + rng.choice((0, 2, 4, 8, 8, 16))
            r = rng.below(10)
            if r < 2:
                kind = ("none",)
            elif r < 5:
                kind = ("own", 8 * rng.randint(-2, 2))
            else:
                kind = ("slot",)
            sources.append((low, high, kind))
        mapped = [k for k, s in enumerate(sources) if s[2][0] != "none"]
        if need_mapped and not mapped:
            continue
        storable = [k for k, s in enumerate(sources) if s[1] - s[0] >= 1]
        stores = []
        for _ in range(rng.below(5)):
            if not storable:
                break
            k = rng.choice(storable)
            low, high, _ = sources[k]
            t = rng.choice(ALL_CHUNKS)
            i = _aligned_slot(rng, low, high, t)
            if i is None:
                continue
            r = rng.below(6)
            if r < 1:
                vspec = ("undef",)
            elif r < 4:
                vspec = ("int", rng.randint(-8, 300))
            elif r < 5:
                vspec = ("float", rng.choice(FLOAT_POOL).bits)
            elif mapped:
                vspec = ("ptr", rng.choice(mapped), rng.randint(-2, 6))
            else:
                vspec = ("int", rng.randint(-8, 8))
            stores.append((k, t, i, vspec))
        frees = tuple(
            k for k in range(len(sources)) if rng.chance(1, 6)
        )
        extra_targets = tuple(
            (0, rng.choice((4, 8))) for _ in range(rng.below(3))
        )
        extra_stores = []
        for _ in range(rng.below(2)):
            if not extra_targets:
                break
            k = rng.below(len(extra_targets))
            low, high = extra_targets[k]
            t = rng.choice(ALL_CHUNKS)
            i = _aligned_slot(rng, low, high, t)
            if i is not None:
                extra_stores.append((k, t, i, ("int", rng.randint(-8, 8))))
        return EmbPlan(
            sources=tuple(sources),
            frees=frees,
            stores=tuple(stores),
            extra_targets=extra_targets,
            extra_stores=tuple(extra_stores),
            overlap=rng.chance(*overlap_chance),
            hole_span=hole_span,
        )


def shrink_emb_plan(plan: EmbPlan):
    for k in range(len(plan.stores) - 1, -1, -1):
        yield EmbPlan(
            sources=plan.sources,
            frees=plan.frees,
            stores=plan.stores[:k] + plan.stores[k + 1 :],
            extra_targets=plan.extra_targets,
            extra_stores=plan.extra_stores,
            overlap=plan.overlap,
            hole_span=plan.hole_span,
        )
    if plan.frees:
        yield EmbPlan(
            sources=plan.sources,
            frees=(),
            stores=plan.stores,
            extra_targets=plan.extra_targets,
            extra_stores=plan.extra_stores,
            overlap=plan.overlap,
            hole_span=plan.hole_span,
        )
    if plan.extra_targets and not plan.extra_stores:
        yield EmbPlan(
            sources=plan.sources,
            frees=plan.frees,
            stores=plan.stores,
            extra_targets=(),
            extra_stores=(),
            overlap=plan.overlap,
            hole_span=plan.hole_span,
        )


# --- the exhaustive tiny universe ---------------------------------------------

TINY_BOUNDS = ((0, 0), (0, 4), (-4, 4), (0, 8), (-4, 8))
TINY_BOUNDS_SMALL = ((0, 8), (-4, 4), (0, 4))
TINY_BOUNDS_SECOND = ((0, 8), (-4, 8))

TINY_CONTENT = (
    (),
    ((Chunk.INT32, 0, Vint(1)),),
    ((Chunk.INT8U, 1, Vint(300)), (Chunk.INT16S, 2, Vint(-2))),
    ((Chunk.FLOAT64, 0, Vfloat.from_float(1.5)),),
)

TINY_VALUES = (VUNDEF, Vint(7), Vint(300), Vfloat.from_float(1.5), Vptr(1, 0))


def _tiny_build(bounds_list, content_list, freed_mask):
    ops = []
    for low, high in bounds_list:
        ops.append(("alloc", low, high))
    for k, content in enumerate(content_list):
        for t, i, v in content:
            if i + chunks.size_chunk(t) <= bounds_list[k][1] and i >= bounds_list[k][0]:
                ops.append(("store", t, k, i, v))
    for k in range(len(bounds_list)):
        if freed_mask & (1 << k):
            ops.append(("free", k))
    ops = tuple(ops)
    return ops, run_ops(ops).state


@lru_cache(maxsize=None)
def tiny_states_small():
    """A few hundred reachable states: up to two blocks, bounds within
    [-4, 8), freed combinations, a handful of content shapes."""
    out = [_tiny_build((), (), 0)]
    for bd in TINY_BOUNDS_SMALL:
        for content in TINY_CONTENT[:3]:
            for freed in (0, 1):
                out.append(_tiny_build((bd,), (content,), freed))
    for bd1 in TINY_BOUNDS_SMALL:
        for bd2 in TINY_BOUNDS_SECOND:
            for c1 in TINY_CONTENT[:3]:
                for c2 in TINY_CONTENT[:3]:
                    for freed in range(4):
                        out.append(_tiny_build((bd1, bd2), (c1, c2), freed))
    return tuple(out)


@lru_cache(maxsize=None)
def tiny_states_full():
    """The full tiny universe: all bounds pairs from the [-4, 8) palette,
    all content shapes, all freed subsets."""
    out = [_tiny_build((), (), 0)]
    for bd in TINY_BOUNDS:
        for content in TINY_CONTENT:
            for freed in (0, 1):
                out.append(_tiny_build((bd,), (content,), freed))
    for bd1 in TINY_BOUNDS:
        for bd2 in TINY_BOUNDS:
            for c1 in TINY_CONTENT:
                for c2 in TINY_CONTENT:
                    for freed in range(4):
                        out.append(_tiny_build((bd1, bd2), (c1, c2), freed))
    return tuple(out)


def tiny_probe_blocks(m: MemState):
    return (0, 1, 2, m.nextblock)
