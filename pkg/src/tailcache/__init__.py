"""tailcache - tail-latency-aware KV-cache eviction for multi-turn LLM serving.

Replay conversation traces through LRU and tail-optimized eviction policies
and compare the modeled time-to-first-token tail.

Quick Start:
    >>> from tailcache import PolicyConfig, PolicyFamily, replay, sharegpt_preset
    >>> from tailcache import generate_synthetic
    >>> trace = generate_synthetic(sharegpt_preset(seed=7))
    >>> policy = PolicyConfig(family=PolicyFamily.TLRU, xi_blocks=150)
    >>> replay(trace, policy, capacity=2000).report.p90

Exact hindsight optimum of a micro-instance:
    >>> from tailcache import solve_hindsight_tel, load_instance
    >>> solve_hindsight_tel(load_instance("instance.json")).tel_blocks
"""

from tailcache._version import __version__

# Exceptions
from tailcache.exceptions import (
    TailCacheError,
    ConfigurationError,
    InvalidArgumentError,
    TraceParseError,
    TraceValidationError,
    WorkloadError,
    CapacityInfeasibleError,
    ClairvoyanceError,
    InstanceTooLargeError,
    ScheduleError,
    CellFailureError,
)

# Models
from tailcache.models import (
    TurnEvent,
    Trace,
    PromptLengthDistribution,
    SyntheticParams,
    PolicyFamily,
    CachingMode,
    PolicyConfig,
    EvictionDecision,
    LatencyModel,
    RequestRecord,
    MetricsReport,
    HindsightInstance,
    HindsightSolution,
    RunConfig,
    ComparisonTable,
)

# Core
from tailcache.core import CacheState, Lookahead, validate_trace
from tailcache.core.engine import apply_arrival

# Workloads
from tailcache.workload import (
    generate_synthetic,
    load_conversations,
    load_run_config,
    sharegpt_preset,
    wildchat_like_preset,
    write_trace,
)

# Oracle
from tailcache.oracle import load_instance, solve_hindsight_tel

# Simulation
from tailcache.sim import compare, monte_carlo_policy_test, oracle_check, replay

__all__ = [
    # Version
    "__version__",
    # Exceptions
    "TailCacheError",
    "ConfigurationError",
    "InvalidArgumentError",
    "TraceParseError",
    "TraceValidationError",
    "WorkloadError",
    "CapacityInfeasibleError",
    "ClairvoyanceError",
    "InstanceTooLargeError",
    "ScheduleError",
    "CellFailureError",
    # Models
    "TurnEvent",
    "Trace",
    "PromptLengthDistribution",
    "SyntheticParams",
    "PolicyFamily",
    "CachingMode",
    "PolicyConfig",
    "EvictionDecision",
    "LatencyModel",
    "RequestRecord",
    "MetricsReport",
    "HindsightInstance",
    "HindsightSolution",
    "RunConfig",
    "ComparisonTable",
    # Core
    "CacheState",
    "Lookahead",
    "validate_trace",
    "apply_arrival",
    # Workloads
    "generate_synthetic",
    "load_conversations",
    "load_run_config",
    "sharegpt_preset",
    "wildchat_like_preset",
    "write_trace",
    # Oracle
    "load_instance",
    "solve_hindsight_tel",
    # Simulation
    "compare",
    "monte_carlo_policy_test",
    "oracle_check",
    "replay",
]
