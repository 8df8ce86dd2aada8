"""Trace ingestion and synthetic workload generation."""

from tailcache.workload.belief import belief_survival
from tailcache.workload.ingest import (
    TraceRecord,
    fit_prompt_distribution,
    load_conversations,
    write_trace,
)
from tailcache.workload.synthetic import conversation_turns, generate_synthetic
from tailcache.workload.presets import (
    death_rate_for_mean_turns,
    sharegpt_preset,
    wildchat_like_preset,
)
from tailcache.workload.config import (
    load_policy_config,
    load_run_config,
    load_synthetic_params,
    resolve_distribution,
)

__all__ = [
    "belief_survival",
    "TraceRecord",
    "fit_prompt_distribution",
    "load_conversations",
    "write_trace",
    "conversation_turns",
    "generate_synthetic",
    "death_rate_for_mean_turns",
    "sharegpt_preset",
    "wildchat_like_preset",
    "load_policy_config",
    "load_run_config",
    "load_synthetic_params",
    "resolve_distribution",
]
