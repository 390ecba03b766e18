"""State-level laws: the axiom groups over alloc/free/load/store.

Cases are scenarios plus a quantifier assignment (an access triple, a
probe block, alloc arguments).  The exhaustive phase sweeps the tiny
universe; the random phase draws reachable states and mostly-valid
assignments, with deliberate invalid probes mixed in so that both
directions of the iff-style laws get exercised.
"""

from __future__ import annotations

from .. import chunks, memstate
from ..chunks import ALL_CHUNKS, Chunk, Vint, VUNDEF
from . import generators, oracle
from .laws_base import (
    CONCRETE_MEM,
    GEN_MEM,
    G_ACCESS,
    G_BOUNDS,
    G_DETERMINISM,
    G_FRESH,
    G_GOODVARS,
    G_VALIDITY,
    MEM_INJECT,
    REF_GEN_MEM,
    deflaw,
    state_of,
)

_ALLOC_ARGS = ((0, 8), (-4, 4), (0, 0), (2, 1), (0, 4))


def _tiny():
    return generators.tiny_states_small()


def _sample_alloc_args(rng):
    low = rng.randint(-6, 6)
    if rng.chance(1, 10):
        return low, low - rng.below(3)
    return low, low + rng.choice((0, 1, 2, 4, 8, 12))


def _valid_blocks(m):
    return [b for b in range(1, m.nextblock) if b not in m.freed]


# --- generic samplers ---------------------------------------------------------


def _sm_state_probe(rng):
    ops = tuple(generators.sample_ops(rng))
    m = state_of(ops)
    b = rng.choice((0, 1, 2, 3, m.nextblock, m.nextblock + 2))
    return ("state", ops, b)


def _sm_state_access(rng):
    """State plus an access triple, valid three times out of four."""
    ops = tuple(generators.sample_ops(rng))
    m = state_of(ops)
    if rng.chance(3, 4):
        acc = generators.sample_valid_access(rng, m)
        if acc is not None:
            return ("state", ops) + acc
    return ("state", ops) + generators.sample_access_probe(rng, m)


def _sm_state_store(rng):
    """State plus a store assignment that will succeed, if possible."""
    ops = tuple(generators.sample_ops(rng))
    m = state_of(ops)
    acc = generators.sample_valid_access(rng, m)
    if acc is None:
        return ("skip",)
    t, b, i = acc
    v = generators.sample_value(rng, tuple(_valid_blocks(m)))
    return ("state", ops, t, b, i, v)


def _sm_state_alloc(rng):
    ops = tuple(generators.sample_ops(rng))
    low, high = _sample_alloc_args(rng)
    return ("state", ops, low, high)


def _sm_state_free(rng):
    ops = tuple(generators.sample_ops(rng))
    m = state_of(ops)
    blocks = _valid_blocks(m)
    if blocks and rng.chance(4, 5):
        return ("state", ops, rng.choice(blocks))
    return ("state", ops, rng.choice((0, 1, m.nextblock)))


def _ex_state_probe():
    for ops, m in _tiny():
        for b in generators.tiny_probe_blocks(m):
            yield ("state", ops, b)


def _ex_state_access():
    for ops, m in _tiny():
        for b in generators.tiny_probe_blocks(m):
            for t in ALL_CHUNKS:
                for i in (-4, -1, 0, 1, 2, 4, 6):
                    yield ("state", ops, t, b, i)


def _ex_state_store():
    from .. import relations

    for ops, m in _tiny():
        done = 0
        for b in _valid_blocks(m):
            for t, i in relations.valid_accesses(m, b)[:6]:
                for v in (Vint(7), VUNDEF):
                    yield ("state", ops, t, b, i, v)
                done += 1
                if done >= 8:
                    break
            if done >= 8:
                break


def _ex_state_alloc():
    for ops, m in _tiny():
        for low, high in _ALLOC_ARGS:
            yield ("state", ops, low, high)


def _ex_state_free():
    for ops, m in _tiny():
        for b in generators.tiny_probe_blocks(m):
            yield ("state", ops, b)


# --- decidability / definitional laws ------------------------------------------


def _ck_valid_block_dec(case):
    _, ops, b = case
    m = state_of(ops)
    spelled = 1 <= b < m.nextblock and b not in m.freed
    if memstate.valid_block(m, b) != spelled:
        return f"valid_block({b}) disagrees with its definition"
    return None


deflaw(
    "valid_block_dec",
    CONCRETE_MEM,
    "block validity agrees with its spelled-out definition",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_probe,
    sample=_sm_state_probe,
    check=_ck_valid_block_dec,
)


def _ck_aligned_dec(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    if memstate.valid_access(m, t, b, i) and i % chunks.align_chunk(t) != 0:
        return f"valid access at misaligned offset {i} for {t.token}"
    return None


deflaw(
    "aligned_dec",
    CONCRETE_MEM,
    "every valid access is aligned",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_aligned_dec,
)


def _ck_valid_pointer_dec(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    low, high = memstate.bounds(m, b)
    spelled = (
        memstate.valid_block(m, b)
        and low <= i
        and i + chunks.size_chunk(t) <= high
        and i % chunks.align_chunk(t) == 0
    )
    if memstate.valid_access(m, t, b, i) != spelled:
        return f"valid_access({t.token}, {b}, {i}) disagrees with its definition"
    return None


deflaw(
    "valid_pointer_dec",
    CONCRETE_MEM,
    "valid access agrees with its four-conjunct definition",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_valid_pointer_dec,
)


# --- bounds (S14-S17) -----------------------------------------------------------


def _ck_alloc_result_bounds(case):
    _, ops, low, high = case
    m = state_of(ops)
    r = memstate.alloc(m, low, high)
    if r is None:
        return None
    b, m2 = r
    if memstate.bounds(m2, b) != (low, high):
        return "fresh block does not carry the requested bounds"
    return None


deflaw(
    "alloc_result_bounds_",
    CONCRETE_MEM,
    "a fresh block has the bounds given to alloc",
    family="state",
    groups=(G_BOUNDS,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_alloc_result_bounds,
)


def _ck_alloc_bounds_inv(case):
    _, ops, low, high = case
    m = state_of(ops)
    r = memstate.alloc(m, low, high)
    if r is None:
        return None
    b, m2 = r
    for other in range(0, m.nextblock + 1):
        if other != b and memstate.bounds(m2, other) != memstate.bounds(m, other):
            return f"alloc changed the bounds of block {other}"
    return None


deflaw(
    "alloc_bounds_inv_",
    CONCRETE_MEM,
    "alloc preserves the bounds of every other block",
    family="state",
    groups=(G_BOUNDS,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_alloc_bounds_inv,
)


def _ck_store_bounds_inv(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v = case
    m = state_of(ops)
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    for other in range(0, m.nextblock + 1):
        if memstate.bounds(m2, other) != memstate.bounds(m, other):
            return f"store changed the bounds of block {other}"
    return None


deflaw(
    "store_bounds_inv_",
    CONCRETE_MEM,
    "store preserves all bounds",
    family="state",
    groups=(G_BOUNDS,),
    exhaustive=_ex_state_store,
    sample=_sm_state_store,
    check=_ck_store_bounds_inv,
)


def _ck_free_bounds_inv(case):
    _, ops, b = case
    m = state_of(ops)
    m2 = memstate.free(m, b)
    if m2 is None:
        return None
    for other in range(0, m.nextblock + 1):
        if other != b and memstate.bounds(m2, other) != memstate.bounds(m, other):
            return f"free changed the bounds of block {other}"
    return None


deflaw(
    "free_bounds_inv_",
    CONCRETE_MEM,
    "free preserves the bounds of every other block",
    family="state",
    groups=(G_BOUNDS,),
    exhaustive=_ex_state_free,
    sample=_sm_state_free,
    check=_ck_free_bounds_inv,
)


def _ck_free_same_bounds(case):
    _, ops, b = case
    m = state_of(ops)
    m2 = memstate.free(m, b)
    if m2 is None:
        return None
    if memstate.bounds(m2, b) != memstate.bounds(m, b):
        return "free changed the bounds of the freed block"
    return None


deflaw(
    "free_same_bounds_",
    CONCRETE_MEM,
    "the freed block keeps its bounds",
    family="state",
    groups=(G_BOUNDS,),
    exhaustive=_ex_state_free,
    sample=_sm_state_free,
    check=_ck_free_same_bounds,
)


# --- validity (S9-S13) ------------------------------------------------------------


def _ck_alloc_valid_block(case):
    _, ops, low, high = case
    m = state_of(ops)
    r = memstate.alloc(m, low, high)
    if r is None:
        return None
    b, m2 = r
    if not memstate.valid_block(m2, b):
        return "fresh block is not valid after alloc"
    return None


deflaw(
    "alloc_valid_block",
    CONCRETE_MEM,
    "alloc validates the new block",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_alloc_valid_block,
)


def _ck_alloc_not_valid_block(case):
    _, ops, b = case
    m = state_of(ops)
    r = memstate.alloc(m, 0, 4)
    if r is None:
        return None
    nb, m2 = r
    if b != nb and not memstate.valid_block(m, b) and memstate.valid_block(m2, b):
        return f"alloc validated unrelated block {b}"
    return None


deflaw(
    "alloc_not_valid_block_",
    CONCRETE_MEM,
    "alloc validates nothing but the new block",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_probe,
    sample=_sm_state_probe,
    check=_ck_alloc_not_valid_block,
)


def _ck_load_valid_block(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    if memstate.load(t, m, b, i) is not None and not memstate.valid_block(m, b):
        return "load succeeded on an invalid block"
    return None


deflaw(
    "load_valid_block_",
    CONCRETE_MEM,
    "a successful load implies a valid block",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_load_valid_block,
)


def _ck_store_valid_block(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v = case
    m = state_of(ops)
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    for other in range(1, m.nextblock):
        if memstate.valid_block(m, other) and not memstate.valid_block(m2, other):
            return f"store invalidated block {other}"
    return None


deflaw(
    "store_valid_block_",
    CONCRETE_MEM,
    "store preserves block validity",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_store,
    sample=_sm_state_store,
    check=_ck_store_valid_block,
)


def _ck_store_valid_block_inv(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v = case
    m = state_of(ops)
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    for other in range(1, m2.nextblock):
        if memstate.valid_block(m2, other) and not memstate.valid_block(m, other):
            return f"store validated block {other}"
    return None


deflaw(
    "store_valid_block_inv_",
    CONCRETE_MEM,
    "store validates no block",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_store,
    sample=_sm_state_store,
    check=_ck_store_valid_block_inv,
)


def _ck_free_valid_block(case):
    _, ops, b = case
    m = state_of(ops)
    m2 = memstate.free(m, b)
    if m2 is None:
        return None
    for other in range(1, m.nextblock):
        if other != b and memstate.valid_block(m, other) != memstate.valid_block(m2, other):
            return f"free changed the validity of block {other}"
    return None


deflaw(
    "free_valid_block_",
    CONCRETE_MEM,
    "free changes no other block's validity",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_free,
    sample=_sm_state_free,
    check=_ck_free_valid_block,
)


def _ck_free_not_valid_block(case):
    _, ops, b = case
    m = state_of(ops)
    m2 = memstate.free(m, b)
    if m2 is not None and memstate.valid_block(m2, b):
        return "freed block is still valid"
    return None


deflaw(
    "free_not_valid_block_",
    CONCRETE_MEM,
    "the freed block is invalid afterwards",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_free,
    sample=_sm_state_free,
    check=_ck_free_not_valid_block,
)


def _ck_valid_block_free(case):
    _, ops, b = case
    m = state_of(ops)
    succeeded = memstate.free(m, b) is not None
    if succeeded != memstate.valid_block(m, b):
        return f"free success on {b} disagrees with block validity"
    return None


deflaw(
    "valid_block_free_",
    CONCRETE_MEM,
    "free succeeds exactly on valid blocks",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_free,
    sample=_sm_state_free,
    check=_ck_valid_block_free,
)


# --- freshness (P30-P34) ------------------------------------------------------------


def _ck_fresh_exclusive(case):
    _, ops, b = case
    m = state_of(ops)
    if memstate.fresh_block(m, b) and memstate.valid_block(m, b):
        return f"block {b} is both fresh and valid"
    return None


deflaw(
    "fresh_valid_block_exclusive_",
    CONCRETE_MEM,
    "freshness and validity are mutually exclusive",
    family="state",
    groups=(G_FRESH,),
    exhaustive=_ex_state_probe,
    sample=_sm_state_probe,
    check=_ck_fresh_exclusive,
)


def _ck_alloc_fresh(case):
    _, ops, low, high = case
    m = state_of(ops)
    r = memstate.alloc(m, low, high)
    if r is None:
        return None
    b, _ = r
    if not memstate.fresh_block(m, b):
        return "alloc returned a block that was not fresh"
    return None


deflaw(
    "alloc_fresh_block_",
    CONCRETE_MEM,
    "the block returned by alloc was fresh beforehand",
    family="state",
    groups=(G_FRESH,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_alloc_fresh,
)


def _ck_alloc_fresh_2(case):
    _, ops, low, high = case
    m = state_of(ops)
    r = memstate.alloc(m, low, high)
    if r is None:
        return None
    b, m2 = r
    if memstate.fresh_block(m2, b):
        return "allocated block is still fresh"
    for b2 in range(m.nextblock, m.nextblock + 3):
        if memstate.fresh_block(m, b2) and b2 != b and not memstate.fresh_block(m2, b2):
            return f"alloc consumed freshness of {b2}"
    return None


deflaw(
    "alloc_fresh_block_2_",
    CONCRETE_MEM,
    "alloc consumes exactly the freshness of its result",
    family="state",
    groups=(G_FRESH,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_alloc_fresh_2,
)


def _ck_store_fresh(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v = case
    m = state_of(ops)
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    for probe in (0, 1, b, m.nextblock, m.nextblock + 2):
        if memstate.fresh_block(m2, probe) != memstate.fresh_block(m, probe):
            return f"store changed the freshness of {probe}"
    return None


deflaw(
    "store_fresh_block_",
    CONCRETE_MEM,
    "store preserves freshness",
    family="state",
    groups=(G_FRESH,),
    exhaustive=_ex_state_store,
    sample=_sm_state_store,
    check=_ck_store_fresh,
)


def _ck_free_fresh(case):
    _, ops, b = case
    m = state_of(ops)
    m2 = memstate.free(m, b)
    if m2 is None:
        return None
    for probe in (0, 1, b, m.nextblock, m.nextblock + 2):
        if memstate.fresh_block(m2, probe) != memstate.fresh_block(m, probe):
            return f"free changed the freshness of {probe}"
    return None


deflaw(
    "free_fresh_block_",
    CONCRETE_MEM,
    "free preserves freshness",
    family="state",
    groups=(G_FRESH,),
    exhaustive=_ex_state_free,
    sample=_sm_state_free,
    check=_ck_free_fresh,
)


# --- valid access iff (S18, D19-D22) --------------------------------------------------


def _ck_valid_pointer_load(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    if memstate.valid_access(m, t, b, i) and memstate.load(t, m, b, i) is None:
        return "valid access but load failed"
    return None


deflaw(
    "valid_pointer_load_",
    CONCRETE_MEM,
    "loads succeed at valid accesses",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_valid_pointer_load,
)


def _ck_load_valid_pointer(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    if memstate.load(t, m, b, i) is not None and not memstate.valid_access(m, t, b, i):
        return "load succeeded at an invalid access"
    return None


deflaw(
    "load_valid_pointer_",
    CONCRETE_MEM,
    "loads succeed only at valid accesses",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_load_valid_pointer,
)


def _ck_valid_pointer_store(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    if memstate.valid_access(m, t, b, i) and memstate.store(t, m, b, i, Vint(1)) is None:
        return "valid access but store failed"
    return None


deflaw(
    "valid_pointer_store_",
    CONCRETE_MEM,
    "stores succeed at valid accesses",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_valid_pointer_store,
)


def _ck_store_valid_pointer(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    if memstate.store(t, m, b, i, Vint(1)) is not None and not memstate.valid_access(
        m, t, b, i
    ):
        return "store succeeded at an invalid access"
    return None


deflaw(
    "store_valid_pointer_",
    CONCRETE_MEM,
    "stores succeed only at valid accesses",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_store_valid_pointer,
)


def _ck_valid_pointer_compat(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    for t2 in chunks.COMPAT_CHUNKS[t]:
        if memstate.valid_access(m, t, b, i) != memstate.valid_access(m, t2, b, i):
            return f"access validity differs between {t.token} and {t2.token}"
    return None


deflaw(
    "valid_pointer_compat_",
    CONCRETE_MEM,
    "access validity only depends on the chunk's size class",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_valid_pointer_compat,
)


def _preserve_pointer_check(op_name: str, forward: bool):
    def check(case):
        if case[0] == "skip":
            return None
        _, ops, t, b, i, extra = case
        m = state_of(ops)
        if op_name == "alloc":
            r = memstate.alloc(m, 0, 4)
            if r is None:
                return None
            nb, m2 = r
            if b == nb:
                return None
        elif op_name == "free":
            m2 = memstate.free(m, extra)
            if m2 is None:
                return None
        else:
            m2 = memstate.store(Chunk.INT8U, m, extra[0], extra[1], Vint(1))
            if m2 is None:
                return None
        before = memstate.valid_access(m, t, b, i)
        after = memstate.valid_access(m2, t, b, i)
        if forward and before and not after and not (op_name == "free" and b == extra):
            return f"{op_name} lost a valid access in block {b}"
        if not forward and after and not before:
            return f"{op_name} created a valid access in block {b}"
        return None

    return check


def _sm_pointer_inv(op_name: str):
    def sample(rng):
        ops = tuple(generators.sample_ops(rng))
        m = state_of(ops)
        acc = generators.sample_valid_access(rng, m) or generators.sample_access_probe(
            rng, m
        )
        t, b, i = acc
        if op_name == "free":
            blocks = _valid_blocks(m)
            if not blocks:
                return ("skip",)
            extra = rng.choice(blocks)
        elif op_name == "store":
            tgt = generators.sample_valid_access(rng, m)
            if tgt is None:
                return ("skip",)
            extra = (tgt[1], tgt[2])
        else:
            extra = None
        return ("state", ops, t, b, i, extra)

    return sample


def _ex_pointer_inv(op_name: str):
    def gen():
        for ops, m in _tiny():
            for b in _valid_blocks(m) or [1]:
                for t in (Chunk.INT8U, Chunk.INT32):
                    for i in (-4, 0, 1, 4):
                        if op_name == "free":
                            for extra in _valid_blocks(m):
                                yield ("state", ops, t, b, i, extra)
                        elif op_name == "store":
                            for tb in _valid_blocks(m):
                                low, high = memstate.bounds(m, tb)
                                if high - low >= 1:
                                    yield ("state", ops, t, b, i, (tb, low))
                        else:
                            yield ("state", ops, t, b, i, None)

    return gen


deflaw(
    "store_valid_pointer_inv_",
    CONCRETE_MEM,
    "store creates no valid access",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_pointer_inv("store"),
    sample=_sm_pointer_inv("store"),
    check=_preserve_pointer_check("store", forward=False),
)

deflaw(
    "alloc_valid_pointer_inv_",
    CONCRETE_MEM,
    "alloc creates no valid access in other blocks",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_pointer_inv("alloc"),
    sample=_sm_pointer_inv("alloc"),
    check=_preserve_pointer_check("alloc", forward=False),
)

deflaw(
    "free_valid_pointer_inv_",
    CONCRETE_MEM,
    "free creates no valid access",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_pointer_inv("free"),
    sample=_sm_pointer_inv("free"),
    check=_preserve_pointer_check("free", forward=False),
)


# --- good variables (S5-S8) -------------------------------------------------------


def _ck_load_store_same(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v, t2 = case
    m = state_of(ops)
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    got = memstate.load(t2, m2, b, i)
    want = oracle.oracle_convert(v, t2)
    if got != want:
        return f"reload after store gave {got!r}, conversion oracle says {want!r}"
    return None


def _sm_load_store_same(rng):
    base = _sm_state_store(rng)
    if base[0] == "skip":
        return base
    t = base[2]
    return base + (rng.choice(chunks.COMPAT_CHUNKS[t]),)


def _ex_load_store_same():
    for case in _ex_state_store():
        t = case[2]
        for t2 in chunks.COMPAT_CHUNKS[t]:
            yield case + (t2,)


deflaw(
    "load_store_same_",
    CONCRETE_MEM,
    "store then load at the same location yields the converted value",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_load_store_same,
    sample=_sm_load_store_same,
    check=_ck_load_store_same,
)


def _ck_load_store_disjoint(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v, t2, b2, i2 = case
    m = state_of(ops)
    if b == b2 and i < i2 + chunks.size_chunk(t2) and i2 < i + chunks.size_chunk(t):
        return None  # overlapping, not this law's case
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    if memstate.load(t2, m2, b2, i2) != memstate.load(t2, m, b2, i2):
        return f"store at ({b}, {i}) changed a disjoint load at ({b2}, {i2})"
    return None


def _sm_load_store_disjoint(rng):
    base = _sm_state_store(rng)
    if base[0] == "skip":
        return base
    ops = base[1]
    m = state_of(ops)
    probe = generators.sample_valid_access(rng, m) or generators.sample_access_probe(
        rng, m
    )
    return base + probe


def _ex_load_store_disjoint():
    for case in _ex_state_store():
        ops, t, b, i, v = case[1], case[2], case[3], case[4], case[5]
        m = state_of(ops)
        for b2 in _valid_blocks(m):
            for t2 in (Chunk.INT8U, Chunk.INT32):
                for i2 in (-4, 0, 2, 4):
                    yield case + (t2, b2, i2)


deflaw(
    "load_store_disjoint_",
    CONCRETE_MEM,
    "a store preserves loads at disjoint footprints",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_load_store_disjoint,
    sample=_sm_load_store_disjoint,
    check=_ck_load_store_disjoint,
)


def _ck_load_store_mismatch(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v, t2 = case
    m = state_of(ops)
    if chunks.compat(t, t2):
        return None
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    got = memstate.load(t2, m2, b, i)
    if got is not None and got != VUNDEF:
        return "size-mismatched reload produced a defined value"
    return None


def _sm_load_store_mismatch(rng):
    base = _sm_state_store(rng)
    if base[0] == "skip":
        return base
    t = base[2]
    others = [t2 for t2 in ALL_CHUNKS if not chunks.compat(t, t2)]
    return base + (rng.choice(others),)


def _ex_load_store_mismatch():
    for case in _ex_state_store():
        t = case[2]
        for t2 in ALL_CHUNKS:
            if not chunks.compat(t, t2):
                yield case + (t2,)


deflaw(
    "load_store_mismatch_",
    CONCRETE_MEM,
    "reading back at a size-mismatched chunk yields undef",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_load_store_mismatch,
    sample=_sm_load_store_mismatch,
    check=_ck_load_store_mismatch,
)


def _ck_load_store_overlap(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v, t2, i2 = case
    m = state_of(ops)
    if i2 == i or not (i < i2 + chunks.size_chunk(t2) and i2 < i + chunks.size_chunk(t)):
        return None
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    got = memstate.load(t2, m2, b, i2)
    if got is not None and got != VUNDEF:
        return f"overlapping reload at {i2} produced a defined value"
    return None


def _sm_load_store_overlap(rng):
    base = _sm_state_store(rng)
    if base[0] == "skip":
        return base
    t, i = base[2], base[4]
    t2 = rng.choice(ALL_CHUNKS)
    i2 = i + rng.randint(-chunks.size_chunk(t2) + 1, chunks.size_chunk(t) - 1)
    return base + (t2, i2)


def _ex_load_store_overlap():
    for case in _ex_state_store():
        t, i = case[2], case[4]
        for t2 in ALL_CHUNKS:
            for d in (-2, -1, 1, 2, 3):
                yield case + (t2, i + d)


deflaw(
    "load_store_overlap_",
    CONCRETE_MEM,
    "reading across an overlapping store yields undef",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_load_store_overlap,
    sample=_sm_load_store_overlap,
    check=_ck_load_store_overlap,
)


def _ck_load_alloc_same(case):
    _, ops, low, high = case
    m = state_of(ops)
    r = memstate.alloc(m, low, high)
    if r is None:
        return None
    b, m2 = r
    from .. import relations

    for t, i in relations.valid_accesses(m2, b)[:12]:
        if memstate.load(t, m2, b, i) != VUNDEF:
            return f"fresh block loaded defined at ({t.token}, {i})"
    return None


deflaw(
    "load_alloc_same_",
    CONCRETE_MEM,
    "every load from a fresh block yields undef",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_load_alloc_same,
)


def _ck_load_alloc_other(case):
    _, ops, t, b, i = case
    m = state_of(ops)
    before = memstate.load(t, m, b, i)
    if before is None:
        return None
    r = memstate.alloc(m, 0, 8)
    if r is None:
        return None
    _, m2 = r
    if memstate.load(t, m2, b, i) != before:
        return "alloc changed a load in an existing block"
    return None


deflaw(
    "load_alloc_other_",
    CONCRETE_MEM,
    "alloc preserves loads in existing blocks",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_load_alloc_other,
)


def _ck_load_free_other(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, victim = case
    m = state_of(ops)
    if victim == b:
        return None
    before = memstate.load(t, m, b, i)
    if before is None:
        return None
    m2 = memstate.free(m, victim)
    if m2 is None:
        return None
    if memstate.load(t, m2, b, i) != before:
        return f"freeing {victim} changed a load in block {b}"
    return None


def _sm_load_free_other(rng):
    ops = tuple(generators.sample_ops(rng))
    m = state_of(ops)
    acc = generators.sample_valid_access(rng, m)
    blocks = _valid_blocks(m)
    if acc is None or not blocks:
        return ("skip",)
    return ("state", ops) + acc + (rng.choice(blocks),)


def _ex_load_free_other():
    for ops, m in _tiny():
        for b in _valid_blocks(m):
            for victim in _valid_blocks(m):
                for t in (Chunk.INT8U, Chunk.INT32):
                    for i in (0, 1, 4):
                        yield ("state", ops, t, b, i, victim)


deflaw(
    "load_free_other_",
    CONCRETE_MEM,
    "free preserves loads in other blocks",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_load_free_other,
    sample=_sm_load_free_other,
    check=_ck_load_free_other,
)


# --- domains and determinism (P35) ---------------------------------------------------


def _scrambled(ops, salt: int):
    out = []
    for op in ops:
        if op[0] == "store":
            out.append((op[0], op[1], op[2], op[3], Vint(9 + salt)))
        else:
            out.append(op)
    return tuple(out)


def _sm_state2(rng):
    ops = tuple(generators.sample_ops(rng))
    return ("state2", ops, _scrambled(ops, rng.below(5)))


def _ex_state2():
    for ops, _ in _tiny():
        yield ("state2", ops, _scrambled(ops, 0))


def _ck_same_domain_nextblock(case):
    _, ops1, ops2 = case
    m1, m2 = state_of(ops1), state_of(ops2)
    if memstate.same_domain(m1, m2) and m1.nextblock != m2.nextblock:
        return "same domain but different next block"
    return None


deflaw(
    "same_domain_same_nextblock",
    CONCRETE_MEM,
    "equal domains share the next-block counter",
    family="state",
    groups=(G_DETERMINISM,),
    exhaustive=_ex_state2,
    sample=_sm_state2,
    check=_ck_same_domain_nextblock,
)


def _ck_alloc_same_domain(case):
    _, ops1, ops2 = case
    m1, m2 = state_of(ops1), state_of(ops2)
    if not memstate.same_domain(m1, m2):
        return None
    for low, high in ((0, 8), (2, 1)):
        r1 = memstate.alloc(m1, low, high)
        r2 = memstate.alloc(m2, low, high)
        if (r1 is None) != (r2 is None):
            return "alloc determinism broken: one side failed"
        if r1 is not None:
            if r1[0] != r2[0]:
                return f"alloc chose different blocks: {r1[0]} vs {r2[0]}"
            if not memstate.same_domain(r1[1], r2[1]):
                return "alloc broke domain equality"
    return None


deflaw(
    "alloc_same_domain_",
    CONCRETE_MEM,
    "alloc picks the same block on equal domains",
    family="state",
    groups=(G_DETERMINISM,),
    exhaustive=_ex_state2,
    sample=_sm_state2,
    check=_ck_alloc_same_domain,
)


def _ck_store_inversion(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v = case
    m = state_of(ops)
    m2 = memstate.store(t, m, b, i, v)
    if m2 is None:
        return None
    if (
        m2.nextblock != m.nextblock
        or m2.freed != m.freed
        or m2.bounds_ != m.bounds_
        or m2.allocated_bytes != m.allocated_bytes
    ):
        return "store changed something besides contents"
    for other, f in m.contents.items():
        if other != b and m2.contents.get(other) != f:
            return f"store changed the contents of block {other}"
    return None


deflaw(
    "store_inversion",
    CONCRETE_MEM,
    "a successful store only rewrites the stored block's contents",
    family="state",
    groups=(G_DETERMINISM,),
    exhaustive=_ex_state_store,
    sample=_sm_state_store,
    check=_ck_store_inversion,
)


# --- general facts (abstract-model module) --------------------------------------------


def _ck_alloc_valid_block_inv(case):
    _, ops, b = case
    m = state_of(ops)
    r = memstate.alloc(m, 0, 4)
    if r is None:
        return None
    nb, m2 = r
    if b != nb and memstate.valid_block(m2, b) and not memstate.valid_block(m, b):
        return f"block {b} became valid across alloc"
    return None


deflaw(
    "alloc_valid_block_inv",
    GEN_MEM,
    "blocks valid after an alloc were valid before, except the new one",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_probe,
    sample=_sm_state_probe,
    check=_ck_alloc_valid_block_inv,
)


def _ck_alloc_not_valid_block_2(case):
    _, ops, b = case
    m = state_of(ops)
    r = memstate.alloc(m, 0, 4)
    if r is None:
        return None
    nb, m2 = r
    if b != nb and not memstate.valid_block(m, b) and memstate.valid_block(m2, b):
        return f"invalid block {b} became valid across alloc"
    return None


deflaw(
    "alloc_not_valid_block_2",
    GEN_MEM,
    "alloc keeps unrelated invalid blocks invalid",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_state_probe,
    sample=_sm_state_probe,
    check=_ck_alloc_not_valid_block_2,
)


deflaw(
    "load_alloc_other_2",
    GEN_MEM,
    "alloc preserves loads in existing blocks",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_state_access,
    sample=_sm_state_access,
    check=_ck_load_alloc_other,
)


def _ck_alloc_result_valid_pointer(case):
    _, ops, low, high = case
    m = state_of(ops)
    r = memstate.alloc(m, low, high)
    if r is None:
        return None
    b, m2 = r
    from .. import relations

    for t, i in relations._access_list(low, high, True):
        if not memstate.valid_access(m2, t, b, i):
            return f"in-bounds aligned access ({t.token}, {i}) invalid in fresh block"
    return None


deflaw(
    "alloc_result_valid_pointer",
    GEN_MEM,
    "a fresh block admits every aligned in-bounds access",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_alloc_result_valid_pointer,
)

deflaw(
    "alloc_valid_pointer_inv",
    GEN_MEM,
    "alloc creates no valid access in other blocks",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_pointer_inv("alloc"),
    sample=_sm_pointer_inv("alloc"),
    check=_preserve_pointer_check("alloc", forward=False),
)

deflaw(
    "store_valid_pointer_inv",
    GEN_MEM,
    "store creates no valid access",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_pointer_inv("store"),
    sample=_sm_pointer_inv("store"),
    check=_preserve_pointer_check("store", forward=False),
)

deflaw(
    "free_valid_pointer_inv",
    GEN_MEM,
    "free creates no valid access",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_pointer_inv("free"),
    sample=_sm_pointer_inv("free"),
    check=_preserve_pointer_check("free", forward=False),
)


def _ck_store_valid_pointer_2(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, extra = case
    m = state_of(ops)
    m2 = memstate.store(Chunk.INT8U, m, extra[0], extra[1], Vint(1))
    if m2 is None:
        return None
    if memstate.valid_access(m, t, b, i) and not memstate.valid_access(m2, t, b, i):
        return "store lost a valid access"
    return None


deflaw(
    "store_valid_pointer_2",
    REF_GEN_MEM,
    "store preserves valid accesses",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_pointer_inv("store"),
    sample=_sm_pointer_inv("store"),
    check=_ck_store_valid_pointer_2,
)

deflaw(
    "load_alloc_same_2",
    REF_GEN_MEM,
    "every load from a fresh block yields undef",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_state_alloc,
    sample=_sm_state_alloc,
    check=_ck_load_alloc_same,
)

deflaw(
    "load_store_mismatch_2",
    REF_GEN_MEM,
    "reading back at a size-mismatched chunk yields undef",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_load_store_mismatch,
    sample=_sm_load_store_mismatch,
    check=_ck_load_store_mismatch,
)

deflaw(
    "load_store_overlap_2",
    REF_GEN_MEM,
    "reading across an overlapping store yields undef",
    family="state",
    groups=(G_GOODVARS,),
    exhaustive=_ex_load_store_overlap,
    sample=_sm_load_store_overlap,
    check=_ck_load_store_overlap,
)


# --- the load/store classification ------------------------------------------------


def _class_predicates(t1, b1, i1, t2, b2, i2):
    same_spot = b1 == b2 and i1 == i2
    overlapping = (
        b1 == b2
        and i1 != i2
        and i1 < i2 + chunks.size_chunk(t2)
        and i2 < i1 + chunks.size_chunk(t1)
    )
    return {
        "similar": same_spot and chunks.compat(t1, t2),
        "mismatch": same_spot and not chunks.compat(t1, t2),
        "overlap": overlapping,
        "other": b1 != b2
        or (not same_spot and not overlapping),
    }


def _sm_classification(rng):
    base = _sm_state_store(rng)
    if base[0] == "skip":
        return base
    ops = base[1]
    m = state_of(ops)
    probe = generators.sample_valid_access(rng, m) or generators.sample_access_probe(
        rng, m
    )
    if rng.chance(1, 2):
        # bias the probe towards the stored location
        probe = (rng.choice(ALL_CHUNKS), base[3], base[4] + rng.randint(-2, 3))
    return base + probe


def _ex_classification():
    for case in _ex_state_store():
        ops, t, b, i = case[1], case[2], case[3], case[4]
        for t2 in (Chunk.INT8U, Chunk.INT16S, Chunk.INT32):
            for d in (-2, 0, 1, 4):
                yield case + (t2, b, i + d)


def _ck_classification(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v, t2, b2, i2 = case
    classes = _class_predicates(t, b, i, t2, b2, i2)
    if sum(classes.values()) != 1:
        return f"classification is not a partition: {classes}"
    return None


deflaw(
    "load_store_classification",
    REF_GEN_MEM,
    "every load/store location pair falls in exactly one class",
    family="state",
    exhaustive=_ex_classification,
    sample=_sm_classification,
    check=_ck_classification,
)


def _make_characterization(mode: str):
    def check(case):
        if case[0] == "skip":
            return None
        _, ops, t, b, i, v, t2, b2, i2 = case
        m = state_of(ops)
        if not _class_predicates(t, b, i, t2, b2, i2)[mode]:
            return None
        m2 = memstate.store(t, m, b, i, v)
        if m2 is None:
            return None
        got = memstate.load(t2, m2, b2, i2)
        if got is None:
            return None
        if mode == "similar":
            want = oracle.oracle_convert(v, t2)
            if got != want:
                return f"similar reload gave {got!r}, expected {want!r}"
        elif mode in ("mismatch", "overlap"):
            if got != VUNDEF:
                return f"{mode} reload produced a defined value"
        else:
            if got != memstate.load(t2, m, b2, i2):
                return "unrelated load changed across the store"
        return None

    return check


for _name, _mode in (
    ("load_store_characterization_lsc_similar", "similar"),
    ("load_store_characterization_lsc_other", "other"),
    ("load_store_characterization_lsc_overlap", "overlap"),
    ("load_store_characterization_lsc_mismatch", "mismatch"),
):
    deflaw(
        _name,
        REF_GEN_MEM,
        f"load-after-store behaves per its class ({_mode})",
        family="state",
        groups=(G_GOODVARS,),
        exhaustive=_ex_classification,
        sample=_sm_classification,
        check=_make_characterization(_mode),
    )


def _ck_store_same_domain(case):
    if case[0] == "skip":
        return None
    _, ops, t, b, i, v = case
    m = state_of(ops)
    m2 = memstate.store(t, m, b, i, v)
    if m2 is not None and not memstate.same_domain(m, m2):
        return "store changed the domain"
    return None


deflaw(
    "store_same_domain",
    REF_GEN_MEM,
    "store preserves the domain",
    family="state",
    groups=(G_DETERMINISM,),
    exhaustive=_ex_state_store,
    sample=_sm_state_store,
    check=_ck_store_same_domain,
)


def _ck_free_same_domain(case):
    _, ops1, ops2, b = case
    m1, m2 = state_of(ops1), state_of(ops2)
    if not memstate.same_domain(m1, m2):
        return None
    r1 = memstate.free(m1, b)
    r2 = memstate.free(m2, b)
    if (r1 is None) != (r2 is None):
        return "parallel frees disagree on success"
    if r1 is not None and not memstate.same_domain(r1, r2):
        return "parallel frees broke domain equality"
    return None


def _sm_free_same_domain(rng):
    ops = tuple(generators.sample_ops(rng))
    m = state_of(ops)
    blocks = _valid_blocks(m)
    b = rng.choice(blocks) if blocks and rng.chance(4, 5) else rng.choice((0, 1))
    return ("state2", ops, _scrambled(ops, rng.below(5)), b)


def _ex_free_same_domain():
    for ops, m in _tiny():
        for b in generators.tiny_probe_blocks(m):
            yield ("state2", ops, _scrambled(ops, 0), b)


deflaw(
    "free_same_domain",
    REF_GEN_MEM,
    "free acts identically on equal domains",
    family="state",
    groups=(G_DETERMINISM,),
    exhaustive=_ex_free_same_domain,
    sample=_sm_free_same_domain,
    check=_ck_free_same_domain,
)


def _ck_free_not_valid_pointer(case):
    _, ops, b = case
    m = state_of(ops)
    m2 = memstate.free(m, b)
    if m2 is None:
        return None
    low, high = memstate.bounds(m, b)
    for t in (Chunk.INT8U, Chunk.INT32):
        for i in (low, 0, high - chunks.size_chunk(t)):
            if memstate.valid_access(m2, t, b, i):
                return f"freed block still admits access ({t.token}, {i})"
    return None


deflaw(
    "free_not_valid_pointer",
    REF_GEN_MEM,
    "a freed block admits no access",
    family="state",
    groups=(G_ACCESS,),
    exhaustive=_ex_state_free,
    sample=_sm_state_free,
    check=_ck_free_not_valid_pointer,
)


# --- list operations --------------------------------------------------------------


def _sm_alloc_list(rng):
    ops = tuple(generators.sample_ops(rng))
    reqs = tuple(_sample_alloc_args(rng) for _ in range(rng.below(4)))
    return ("state", ops, reqs)


def _ex_alloc_list():
    for ops, _ in _tiny():
        for reqs in ((), ((0, 4),), ((0, 4), (0, 8)), ((2, 1), (-4, 4))):
            yield ("state", ops, reqs)


def _ck_alloc_list_unfold(case):
    _, ops, reqs = case
    m = state_of(ops)
    whole = memstate.alloc_list(m, reqs)
    if not reqs:
        if whole != ([], m):
            return "alloc_list on the empty list is not the identity"
        return None
    head = memstate.alloc(m, reqs[0][0], reqs[0][1])
    if head is None:
        if whole is not None:
            return "alloc_list succeeded although its first alloc fails"
        return None
    b, m1 = head
    rest = memstate.alloc_list(m1, reqs[1:])
    if rest is None:
        if whole is not None:
            return "alloc_list succeeded although its tail fails"
        return None
    bs, mf = rest
    if whole != ([b] + bs, mf):
        return "alloc_list does not unfold into alloc plus the tail"
    return None


deflaw(
    "alloc_list_unfold",
    MEM_INJECT,
    "alloc_list unfolds one allocation at a time",
    family="state",
    exhaustive=_ex_alloc_list,
    sample=_sm_alloc_list,
    check=_ck_alloc_list_unfold,
)


def _sm_free_list(rng):
    ops = tuple(generators.sample_ops(rng))
    m = state_of(ops)
    blocks = _valid_blocks(m)
    picks = []
    for _ in range(rng.below(4)):
        if blocks and rng.chance(5, 6):
            picks.append(rng.choice(blocks))
        else:
            picks.append(rng.choice((0, 1, m.nextblock)))
    return ("state", ops, tuple(picks))


def _ex_free_list():
    for ops, m in _tiny():
        blocks = _valid_blocks(m)
        menu = [(), tuple(blocks)]
        if blocks:
            menu.append((blocks[0], blocks[0]))
        for bs in menu:
            yield ("state", ops, bs)


def _ck_free_list_fresh_block(case):
    _, ops, bs = case
    m = state_of(ops)
    m2 = memstate.free_list(m, bs)
    if m2 is None:
        return None
    for b in bs:
        if memstate.fresh_block(m, b):
            return f"free_list freed a fresh block {b}"
    for probe in (0, 1, m.nextblock, m.nextblock + 1):
        if memstate.fresh_block(m2, probe) != memstate.fresh_block(m, probe):
            return f"free_list changed the freshness of {probe}"
    return None


deflaw(
    "free_list_fresh_block",
    MEM_INJECT,
    "free_list never touches fresh blocks and preserves freshness",
    family="state",
    groups=(G_FRESH,),
    exhaustive=_ex_free_list,
    sample=_sm_free_list,
    check=_ck_free_list_fresh_block,
)


def _ck_free_list_not_valid_block(case):
    _, ops, bs = case
    m = state_of(ops)
    m2 = memstate.free_list(m, bs)
    if m2 is None:
        return None
    for b in bs:
        if memstate.valid_block(m2, b):
            return f"block {b} is still valid after free_list"
    return None


deflaw(
    "free_list_not_valid_block",
    "Rel_Mem",
    "no freed-list element stays valid",
    family="state",
    groups=(G_VALIDITY,),
    exhaustive=_ex_free_list,
    sample=_sm_free_list,
    check=_ck_free_list_not_valid_block,
)
