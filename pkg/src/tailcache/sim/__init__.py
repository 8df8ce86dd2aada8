"""Replay engine, comparison grid, oracle certification and Monte-Carlo harness."""

from tailcache.sim.replay import ReplayResult, excess_blocks, replay, resolve_policy
from tailcache.sim.compare import compare, improvement_values, load_trace
from tailcache.sim.oracle_check import (
    belady_tel_blocks,
    check_oracle_bounds,
    largest_served_history,
    oracle_check,
    random_instance,
)
from tailcache.sim.montecarlo import (
    monte_carlo_policy_test,
    paired_comparison,
    policy_for_model,
)
from tailcache.sim.output import (
    plot_comparison,
    write_comparison_csv,
    write_improvements_csv,
    write_json,
    write_records_csv,
)

__all__ = [
    "ReplayResult",
    "excess_blocks",
    "replay",
    "resolve_policy",
    "compare",
    "improvement_values",
    "load_trace",
    "belady_tel_blocks",
    "check_oracle_bounds",
    "largest_served_history",
    "oracle_check",
    "random_instance",
    "monte_carlo_policy_test",
    "paired_comparison",
    "policy_for_model",
    "plot_comparison",
    "write_comparison_csv",
    "write_improvements_csv",
    "write_json",
    "write_records_csv",
]
