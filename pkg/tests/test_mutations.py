"""Every documented seeded bug is caught by at least one named law."""

import pytest

from blockmem import memstate
from blockmem.lawcheck import mutations, registry
from blockmem.lawcheck.runner import SuiteConfig, run_law


def test_six_mutations_documented():
    assert len(mutations.MUTATIONS) == 6
    for mut in mutations.MUTATIONS.values():
        assert mut.caught_by
        for name in mut.caught_by:
            assert name in registry.LAWS


@pytest.mark.parametrize("name", sorted(mutations.MUTATIONS))
def test_mutation_is_detected(name):
    caught = mutations.detecting_laws(name)
    assert caught, f"{name} was not detected by its documented laws"


def test_mutation_context_restores_the_original():
    original = memstate.free
    with mutations.applied("free-validity-unchecked"):
        assert memstate.free is not original
    assert memstate.free is original
    # and the model is healthy again
    assert run_law(registry.law("valid_block_free_"), SuiteConfig(random_cases=200)).passed
