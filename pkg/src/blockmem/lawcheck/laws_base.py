"""Law objects and shared case plumbing.

A *law* is an executable, universally quantified property with a name tag
taken verbatim from the classic lemma inventory for this memory model, so
suite reports can be diffed against that catalogue.  Each law supplies an
exhaustive case iterator over the tiny universe and a random case sampler;
a case is a self-contained tuple (tag, payload...) that the law's checker
can evaluate from scratch, which is what makes shrinking and standalone
counterexample replay possible.

Check functions return ``None`` when the case passes (including vacuously,
when the case fails the law's hypotheses) and a short human-readable
detail string when it exhibits a violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .. import chunks
from . import generators
from .generators import (
    EmbPlan,
    build_emb_scenario,
    build_extends_pair,
    build_lessdef_pair,
    format_ops,
    run_ops,
    shrink_emb_plan,
    shrink_extends_plan,
    shrink_lessdef_plan,
    shrink_ops,
)

# Module tags, matching the catalogue's module names.
GEN_MEM = "Gen_Mem_Facts"
REF_GEN_MEM = "Ref_Gen_Mem_Facts"
CONCRETE_MEM = "Concrete_Mem"
REL_MEM = "Rel_Mem"
MEM_EXTENDS = "Mem_Extends"
MEM_LESSDEF = "Mem_Lessdef"
MEM_INJECT = "Mem_Inject"

# Axiom-group tags used for coverage accounting.
G_GOODVARS = "S5-S8"
G_VALIDITY = "S9-S13"
G_BOUNDS = "S14-S17"
G_ACCESS = "S18/D19-D22"
G_FRESH = "P30-P34"
G_DETERMINISM = "P35"

ALL_GROUPS = (G_GOODVARS, G_VALIDITY, G_BOUNDS, G_ACCESS, G_FRESH, G_DETERMINISM)


@dataclass(frozen=True)
class Law:
    name: str
    module: str
    about: str
    family: str  # "cells" | "state" | "relation"
    groups: tuple = ()
    exhaustive: Callable[[], Iterable] = lambda: ()
    sample: Callable = lambda rng: ("skip",)
    check: Callable = lambda case: None


LAWS: dict[str, Law] = {}


def deflaw(
    name: str,
    module: str,
    about: str,
    *,
    family: str,
    groups: tuple = (),
    exhaustive=lambda: (),
    sample=lambda rng: ("skip",),
    check=lambda case: None,
) -> Law:
    if name in LAWS:
        raise ValueError(f"duplicate law {name}")
    law = Law(name, module, about, family, groups, exhaustive, sample, check)
    LAWS[name] = law
    return law


# --- cached rebuilds ---------------------------------------------------------
#
# Cases carry scenarios, not states; rebuilding through a small memo keeps
# exhaustive sweeps (which revisit the same scenario with many quantifier
# assignments) cheap without giving up replayability.


@lru_cache(maxsize=16384)
def run_cached(ops: tuple):
    return run_ops(ops)


@lru_cache(maxsize=16384)
def state_of(ops: tuple):
    return run_cached(ops).state


@lru_cache(maxsize=8192)
def lessdef_pair_cached(plan: tuple):
    return build_lessdef_pair(plan)


@lru_cache(maxsize=8192)
def extends_pair_cached(plan: tuple):
    return build_extends_pair(plan)


@lru_cache(maxsize=8192)
def emb_scenario_cached(plan: EmbPlan):
    return build_emb_scenario(plan)


@lru_cache(maxsize=4096)
def cells_of(recipe: tuple):
    """Content map built by a sequence of datum stores."""
    from .. import cells

    f: dict = {}
    for t, ofs, v in recipe:
        f = cells.store_contents(f, t, ofs, v)
    return f


def clear_caches() -> None:
    """Drop all memoized rebuilds.  Required around mutation runs, where
    the patched operations must not be shadowed by cached results."""
    run_cached.cache_clear()
    state_of.cache_clear()
    lessdef_pair_cached.cache_clear()
    extends_pair_cached.cache_clear()
    emb_scenario_cached.cache_clear()
    cells_of.cache_clear()
    generators.tiny_states_small.cache_clear()
    generators.tiny_states_full.cache_clear()


def shrink_case(case) -> Iterator:
    """Generic smaller-case candidates, dispatched on the case tag."""
    tag = case[0]
    rest = case[2:]
    if tag == "state":
        for smaller in shrink_ops(list(case[1])):
            yield ("state", tuple(smaller)) + rest
    elif tag == "cells":
        recipe = case[1]
        for k in range(len(recipe) - 1, -1, -1):
            yield ("cells", recipe[:k] + recipe[k + 1 :]) + rest
    elif tag == "lessdef":
        for plan in shrink_lessdef_plan(case[1]):
            yield ("lessdef", plan) + rest
    elif tag in ("lessdef3", "extends3"):
        plan = case[1]
        for k in range(len(plan) - 1, -1, -1):
            if plan[k][0] != "alloc":
                yield (tag, plan[:k] + plan[k + 1 :]) + rest
    elif tag == "extends":
        for plan in shrink_extends_plan(case[1]):
            yield ("extends", plan) + rest
    elif tag == "emb":
        for plan in shrink_emb_plan(case[1]):
            yield ("emb", plan) + rest


def render_case(case) -> dict:
    """Violation payload: a replayable scenario plus the quantifier
    assignment that failed."""
    tag = case[0]
    assignment = repr(case[2:]) if len(case) > 2 else ""
    if tag == "state":
        scenario = format_ops(case[1])
    elif tag == "cells":
        recipe = case[1]
        scenario = "\n".join(
            f"store-contents {t.token} {ofs} {chunks.value_text(v)}" for t, ofs, v in recipe
        )
    elif tag == "lessdef":
        r1, r2, ops1, ops2 = lessdef_pair_cached(case[1])
        scenario = "# left\n" + format_ops(ops1) + "\n# right\n" + format_ops(ops2)
    elif tag == "extends":
        r1, r2, ops1, ops2 = extends_pair_cached(case[1])
        scenario = "# left\n" + format_ops(ops1) + "\n# right\n" + format_ops(ops2)
    elif tag == "emb":
        sc = emb_scenario_cached(case[1])
        emb_lines = "\n".join(f"{b} -> {tb} + {d}" for b, (tb, d) in sorted(sc.emb.items()))
        scenario = (
            "# left\n"
            + format_ops(sc.ops1)
            + "\n# right\n"
            + format_ops(sc.ops2)
            + "\n[emb]\n"
            + emb_lines
        )
    else:
        scenario = repr(case)
    return {"scenario": scenario, "assignment": assignment}
