"""Event-driven replay of a trace through one policy."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from tailcache.core.engine import apply_arrival
from tailcache.core.lookahead import Lookahead, NextArrival
from tailcache.core.state import CacheState
from tailcache.exceptions import ConfigurationError
from tailcache.metrics import summarize
from tailcache.models import (
    EvictionDecision,
    LatencyModel,
    MetricsReport,
    PolicyConfig,
    PolicyFamily,
    RequestRecord,
    Trace,
)
from tailcache.models.run import DEFAULT_SLO_MS
from tailcache.policies import build_policy

logger = logging.getLogger(__name__)


@dataclass
class ReplayResult:
    """Records, report and per-arrival evictions of one replay."""

    records: list[RequestRecord]
    report: MetricsReport
    decisions: list[EvictionDecision] = field(default_factory=list)
    final_state: CacheState | None = None

    def eviction_sequences(self) -> list[list[tuple[int, int]]]:
        """Per arrival, the (conversation_id, blocks) eviction runs."""
        return [d.sequence() for d in self.decisions]

    @property
    def max_uncached_blocks(self) -> int:
        return max((r.uncached_blocks for r in self.records), default=0)


def excess_blocks(records: Iterable[RequestRecord], xi_blocks: int) -> int:
    """TEL in blocks: sum of max(uncached - xi, 0), exact in integers."""
    return sum(max(r.uncached_blocks - xi_blocks, 0) for r in records)


def resolve_policy(config: PolicyConfig, trace: Trace) -> PolicyConfig:
    """Fill trace-dependent defaults: Q-hat falls back to the mean prompt, rounded half up."""
    if config.family.is_tlru_variant and config.q_hat_blocks is None:
        q_hat = math.floor(trace.mean_prompt_blocks() + 0.5)
        logger.debug(f"{config.name}: q_hat defaults to the trace mean prompt ({q_hat} blocks)")
        config = config.model_copy(update={"q_hat_blocks": q_hat})
    if config.family in (PolicyFamily.END_AWARE_TLRU, PolicyFamily.LENGTH_AWARE_TLRU):
        if not trace.has_termination_flags:
            raise ConfigurationError(
                f"{config.name} needs is_last_turn on every event",
                "is_last_turn",
                suggestion="Use a trace that records conversation termination",
            )
    return config


def replay(
    trace: Trace,
    policy: PolicyConfig,
    capacity: int,
    model: LatencyModel | None = None,
    *,
    xi_ms: float | None = None,
    slo_ms: Sequence[float] = (DEFAULT_SLO_MS,),
    keep_decisions: bool = False,
) -> ReplayResult:
    """Replay every event of `trace` through `policy` on a cache of `capacity` blocks.

    Clairvoyant families see the next-arrival map of the conversations that
    have arrived so far; online families never do.

    Args:
        trace: Validated trace
        policy: Policy configuration; Q-hat defaults to the trace mean prompt
        capacity: C in blocks
        model: Latency model (alpha = 1 ms per block by default)
        xi_ms: TEL threshold for the report; defaults to the policy's xi
        slo_ms: SLO thresholds to count violations against
        keep_decisions: Keep every arrival's EvictionDecision in the result

    Raises:
        CapacityInfeasibleError: Forced caching overflow, tagged with the event index

    Example:
        >>> result = replay(revisit_trace, PolicyConfig(family=PolicyFamily.LRU), capacity=100)
        >>> result.max_uncached_blocks
        200
    """
    model = model or LatencyModel(block_size=trace.block_size)
    config = resolve_policy(policy, trace)
    cache_policy = build_policy(config)
    clairvoyant = cache_policy.is_clairvoyant
    lookahead = Lookahead.from_trace(trace) if clairvoyant else None

    state = CacheState(capacity=capacity)
    future: dict[int, NextArrival] = {}
    records: list[RequestRecord] = []
    decisions: list[EvictionDecision] = []

    for index, event in enumerate(trace.events):
        if lookahead is not None:
            future[event.conversation_id] = lookahead.next_after(index)
        outcome = apply_arrival(
            state,
            event,
            cache_policy,
            event_index=index,
            future=future if clairvoyant else None,
            latency=model,
        )
        records.append(outcome.record)
        if keep_decisions:
            decisions.append(outcome.decision)

    threshold_ms = xi_ms if xi_ms is not None else config.xi_blocks * model.alpha_ms_per_block
    report = summarize(records, threshold_ms, model, slo_ms)
    logger.debug(
        f"replay {config.name} C={capacity}: tel={report.tel_blocks:g} blocks p90={report.p90:g}"
    )
    return ReplayResult(records=records, report=report, decisions=decisions, final_state=state)
