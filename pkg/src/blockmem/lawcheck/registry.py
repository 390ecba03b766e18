"""The law registry and the lemma catalogue.

Importing this module registers every law.  The catalogue is the complete
lemma inventory, one entry per name: laws carry an executable check, while
the remaining names are either subsumed by an implemented law that covers
their content, or proof-internal (verification conditions of function
bodies) with no behavioral content of their own.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import laws_cells, laws_relations, laws_state  # noqa: F401  (registration)
from .laws_base import (
    ALL_GROUPS,
    CONCRETE_MEM,
    GEN_MEM,
    LAWS,
    MEM_EXTENDS,
    MEM_INJECT,
    MEM_LESSDEF,
    REF_GEN_MEM,
    REL_MEM,
    Law,
)

MODULE_ORDER = (
    GEN_MEM,
    REF_GEN_MEM,
    CONCRETE_MEM,
    REL_MEM,
    MEM_EXTENDS,
    MEM_LESSDEF,
    MEM_INJECT,
)

IMPLEMENTED = "implemented"
SUBSUMED = "subsumed"
OUT_OF_SCOPE = "out of scope (proof-internal)"


@dataclass(frozen=True)
class LemmaEntry:
    name: str
    module: str
    status: str
    subsumed_by: tuple = ()


_EXTRA_ENTRIES = (
    # Function-body verification conditions: termination and contract of the
    # two recursive helpers; no behavioral content beyond the
    # characterization laws that exercise them.
    LemmaEntry("check_cont", CONCRETE_MEM, OUT_OF_SCOPE),
    LemmaEntry("set_cont", CONCRETE_MEM, OUT_OF_SCOPE),
    # Proof-shape variants of implemented laws.
    LemmaEntry("check_cont_charact_if", CONCRETE_MEM, SUBSUMED, ("check_cont_charact",)),
    LemmaEntry("check_cont_charact_else", CONCRETE_MEM, SUBSUMED, ("check_cont_charact",)),
    LemmaEntry(
        "check_cont_charact_original", CONCRETE_MEM, SUBSUMED, ("check_cont_charact",)
    ),
    LemmaEntry("set_cont_outside_original", CONCRETE_MEM, SUBSUMED, ("set_cont_outside",)),
    LemmaEntry("set_cont_inside_original", CONCRETE_MEM, SUBSUMED, ("set_cont_inside",)),
    LemmaEntry("free_list_left_emb_original", REL_MEM, SUBSUMED, ("free_list_left_emb",)),
    LemmaEntry(
        "free_list_not_valid_block_original",
        REL_MEM,
        SUBSUMED,
        ("free_list_not_valid_block",),
    ),
    LemmaEntry("store_lessdef_original", MEM_LESSDEF, SUBSUMED, ("store_lessdef",)),
    LemmaEntry(
        "alloc_list_left_inject_original",
        MEM_INJECT,
        SUBSUMED,
        ("alloc_list_left_inject",),
    ),
)


def catalogue() -> tuple[LemmaEntry, ...]:
    """Every lemma name with its status, in canonical module-then-name
    order, so the report can be diffed against the inventory tables."""
    entries = [
        LemmaEntry(law.name, law.module, IMPLEMENTED) for law in LAWS.values()
    ] + list(_EXTRA_ENTRIES)
    entries.sort(key=lambda e: (MODULE_ORDER.index(e.module), e.name))
    return tuple(entries)


def group_coverage() -> dict[str, tuple[str, ...]]:
    """Axiom-group tag -> names of the laws carrying it."""
    cov: dict[str, list[str]] = {g: [] for g in ALL_GROUPS}
    for law in LAWS.values():
        for g in law.groups:
            cov[g].append(law.name)
    return {g: tuple(names) for g, names in cov.items()}


def law(name: str) -> Law:
    return LAWS[name]
