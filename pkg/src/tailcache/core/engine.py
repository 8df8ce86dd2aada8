"""Per-arrival state machine: serve, admit, adjust, evict."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

from tailcache.core.lookahead import NextArrival
from tailcache.core.state import CacheState
from tailcache.exceptions import CapacityInfeasibleError
from tailcache.models import (
    CachingMode,
    EvictionDecision,
    EvictionPhase,
    LatencyModel,
    PolicyConfig,
    RequestRecord,
    TurnEvent,
)
from tailcache.policies import CachePolicy, EvictionContext, build_policy

logger = logging.getLogger(__name__)

_DEFAULT_LATENCY = LatencyModel()


@dataclass
class ArrivalOutcome:
    """Result of one apply_arrival call; `state` is the mutated input."""

    state: CacheState
    record: RequestRecord
    decision: EvictionDecision


def apply_arrival(
    state: CacheState,
    event: TurnEvent,
    policy: CachePolicy | PolicyConfig,
    *,
    event_index: int = 0,
    future: Mapping[int, NextArrival] | None = None,
    latency: LatencyModel | None = None,
) -> ArrivalOutcome:
    """Serve one request and bring the cache back within capacity.

    The request is charged for L + q - X blocks, where X is what the policy
    kept. Then L grows by q + a, the policy chooses the new X (forced mode
    pins it at L), variant hooks run, and any overflow is evicted.

    Args:
        state: Cache state, mutated in place
        event: Arriving turn
        policy: Policy instance, or a config to build one from
        event_index: Position in the trace, used in records and errors
        future: Next-arrival map, already advanced past this event
        latency: TTFT model for the record (alpha = 1 by default)

    Raises:
        CapacityInfeasibleError: Forced caching of a history larger than the cache

    Example:
        >>> state = CacheState(capacity=100)
        >>> outcome = apply_arrival(state, TurnEvent(conversation_id=0, timestamp=0.0,
        ...                                          prompt_blocks=10), LruPolicy(config))
        >>> outcome.record.uncached_blocks, state.cached(0)
        (10, 10)
    """
    if isinstance(policy, PolicyConfig):
        policy = build_policy(policy)
    model = latency or _DEFAULT_LATENCY
    cid = event.conversation_id
    entry = state.entry(cid)

    cached_before = entry.cached_blocks
    record = model.record(
        event_index=event_index,
        conversation_id=cid,
        timestamp=event.timestamp,
        uncached_blocks=entry.history_blocks + event.prompt_blocks - cached_before,
        cached_blocks_used=cached_before,
    )

    entry.history_blocks += event.turn_blocks
    entry.last_turn_timestamp = event.timestamp
    entry.turn_count += 1
    entry.free_marked_blocks = 0

    forced = policy.config.caching_mode == CachingMode.FORCED
    context = EvictionContext(
        now=event.timestamp,
        arriving_id=cid,
        pinned=cid if forced else None,
        future=future,
    )

    decision = EvictionDecision()
    if forced:
        if entry.history_blocks > state.capacity:
            raise CapacityInfeasibleError(
                cid, entry.history_blocks, state.capacity, event_index=event_index
            )
        policy.admit(state, event, context)
        entry.cached_blocks = entry.history_blocks
    else:
        target = min(max(policy.admit(state, event, context), 0), entry.history_blocks)
        if target < cached_before:
            decision.add(cid, cached_before - target, EvictionPhase.BELOW_THRESHOLD)
        entry.cached_blocks = target

    decision.extend(policy.adjust(state, event, context))

    overflow = state.overflow
    if overflow > 0:
        decision.extend(policy.evict(state, context, overflow))

    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(
            f"event {event_index}: conversation {cid} uncached={record.uncached_blocks} "
            f"evicted={decision.sequence()} total={state.total_cached}/{state.capacity}"
        )
    return ArrivalOutcome(state=state, record=record, decision=decision)
