"""Block/offset memory model with executable law checking.

The model lives in ``chunks`` (values and access types), ``cells``
(per-block content maps), ``memstate`` (states and the four operations)
and ``relations`` (refinement, extension, embedding and injection
checkers).  ``lawcheck`` evaluates the named law suite against generated
scenarios, and ``trace``/``cli`` provide the trace interpreter front end.
"""

from .chunks import (
    ALL_CHUNKS,
    Chunk,
    Value,
    Vfloat,
    Vint,
    Vptr,
    Vundef,
    VUNDEF,
    align_chunk,
    compat,
    convert,
    size_chunk,
)
from .memstate import (
    CapacityPolicy,
    DEFAULT_CONFIG,
    MemConfig,
    MemState,
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
from .relations import (
    Embedding,
    emb_incr,
    emb_no_overlap,
    mem_emb,
    mem_extends,
    mem_inject,
    mem_lessdef,
    val_emb,
    val_lessdef,
)

__all__ = [
    "ALL_CHUNKS",
    "CapacityPolicy",
    "Chunk",
    "DEFAULT_CONFIG",
    "Embedding",
    "MemConfig",
    "MemState",
    "VUNDEF",
    "Value",
    "Vfloat",
    "Vint",
    "Vptr",
    "Vundef",
    "align_chunk",
    "alloc",
    "alloc_list",
    "bounds",
    "compat",
    "convert",
    "emb_incr",
    "emb_no_overlap",
    "empty",
    "free",
    "free_list",
    "fresh_block",
    "load",
    "loadv",
    "mem_emb",
    "mem_extends",
    "mem_inject",
    "mem_lessdef",
    "same_domain",
    "size_chunk",
    "store",
    "storev",
    "val_emb",
    "val_lessdef",
    "valid_access",
    "valid_block",
]
