"""Deterministic pseudo-random numbers for reproducible law runs.

The generator is splitmix64: the state advances by the 64-bit golden-ratio
increment and each output is the mix of the new state.  It is tiny, fast,
and produces identical sequences on every platform, which the replayable
report format depends on.  Per-law streams are derived by folding the law
name (FNV-1a) into the master seed, so a law's case stream never depends
on which other laws run or in what order.
"""

from __future__ import annotations

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _M64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _M64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish draw from [0, n)."""
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Inclusive range draw."""
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.next_u64() % len(seq)]

    def chance(self, num: int, den: int) -> bool:
        """True with probability num/den."""
        return self.next_u64() % den < num


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _M64
    return h


def law_stream(master_seed: int, law_name: str) -> SplitMix64:
    """The per-law case stream for a given master seed."""
    return SplitMix64(master_seed ^ fnv1a64(law_name))
