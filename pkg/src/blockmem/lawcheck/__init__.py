"""Law suite: scenario generators, naive oracle, and the suite runner."""

from .generators import DEFAULT_UNIVERSE, UniverseConfig, gen_state
from .oracle import oracle_exec
from .runner import SuiteConfig, SuiteResult, jsonl_report, run_suite, text_report

__all__ = [
    "DEFAULT_UNIVERSE",
    "SuiteConfig",
    "SuiteResult",
    "UniverseConfig",
    "gen_state",
    "jsonl_report",
    "oracle_exec",
    "run_suite",
    "text_report",
]
