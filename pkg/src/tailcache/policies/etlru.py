"""Expected-Tail-Optimized LRU.

Each cached block of conversation i is scored by the belief-weighted chance
that losing it raises the next turn's excess latency:

    v_i = lambda_i(now) * P(L_i + Q - xi >= X_i)

with lambda_i(now) = lambda-bar_i * exp(-mu * (now - tau_i)). Eviction takes
one block at a time from the lowest score and rescores that conversation.
"""

from __future__ import annotations

import heapq
import logging
from collections.abc import Mapping

from tailcache.core.state import CacheEntry, CacheState
from tailcache.exceptions import ConfigurationError
from tailcache.models import (
    EvictionDecision,
    EvictionPhase,
    PolicyConfig,
    PolicyFamily,
    PromptLengthDistribution,
    TurnEvent,
)
from tailcache.policies.base import CachePolicy, EvictionContext
from tailcache.workload.belief import belief_survival

logger = logging.getLogger(__name__)


def _require_model(config: PolicyConfig) -> tuple[PromptLengthDistribution, float]:
    if config.prompt_dist is None:
        raise ConfigurationError(
            f"{config.name} needs a prompt length distribution", "prompt_dist"
        )
    if config.death_rate is None:
        raise ConfigurationError(f"{config.name} needs a death rate", "death_rate")
    return config.prompt_dist, config.death_rate


def belief_rate(entry: CacheEntry, now: float, config: PolicyConfig) -> float:
    """lambda_i(now), refreshed lazily from tau_i."""
    _, death_rate = _require_model(config)
    elapsed = max(now - entry.last_turn_timestamp, 0.0)
    return config.turn_rate_for(entry.conversation_id) * belief_survival(death_rate, elapsed)


def block_score(entry: CacheEntry, now: float, config: PolicyConfig) -> float:
    """Score of the conversation's last cached block; stores the refreshed lambda_i."""
    prompt_dist, _ = _require_model(config)
    threshold = entry.cached_blocks - entry.history_blocks + config.xi_blocks
    entry.belief_rate = belief_rate(entry, now, config)
    return entry.belief_rate * prompt_dist.survival(threshold)


def etlru_rank(
    state: CacheState,
    now: float,
    config: PolicyConfig,
    *,
    exclude: int | None = None,
) -> list[tuple[int, float]]:
    """Conversations holding blocks, ascending by score.

    Ties go to the older tau, then the lower conversation id.

    Example:
        >>> etlru_rank(state, now=3.0, config=config)
        [(2, 0.0), (0, 0.41), (1, 0.87)]
    """
    _require_model(config)
    scored = [
        (block_score(e, now, config), e.last_turn_timestamp, e.conversation_id)
        for e in state.occupied(exclude)
    ]
    scored.sort()
    return [(cid, score) for score, _, cid in scored]


def etlru_evict(
    state: CacheState,
    now: float,
    overflow: int,
    config: PolicyConfig,
    *,
    exclude: int | None = None,
) -> EvictionDecision:
    """Evict exactly `overflow` blocks, one at a time from the minimum score.

    Only the conversation that just lost a block changes score, so a heap
    keyed by (score, tau, conversation id) stays valid after re-pushing it.
    """
    decision = EvictionDecision()
    heap = [
        (block_score(e, now, config), e.last_turn_timestamp, e.conversation_id)
        for e in state.occupied(exclude)
    ]
    heapq.heapify(heap)

    remaining = overflow
    while remaining > 0 and heap:
        score, tau, cid = heapq.heappop(heap)
        state.evict(cid, 1)
        phase = EvictionPhase.TEL_SAFE_TRIM if score == 0.0 else EvictionPhase.RANKED
        decision.add(cid, 1, phase)
        remaining -= 1
        entry = state.entries[cid]
        if entry.cached_blocks > 0:
            heapq.heappush(heap, (block_score(entry, now, config), tau, cid))

    if remaining > 0:
        logger.warning(f"ET-LRU eviction left {remaining} blocks of overflow unresolved")
    return decision


def etlru_objective(
    state: CacheState,
    now: float,
    config: PolicyConfig,
    allocation: Mapping[int, int],
) -> float:
    """Expected excess cost of keeping `allocation[i]` blocks per conversation.

    sum_i lambda_i(now) * E[(L_i + Q - Y_i - xi)^+]; conversations missing
    from `allocation` keep their current count.
    """
    prompt_dist, _ = _require_model(config)
    total = 0.0
    for cid, entry in state.entries.items():
        kept = allocation.get(cid, entry.cached_blocks)
        offset = entry.history_blocks - kept - config.xi_blocks
        total += belief_rate(entry, now, config) * prompt_dist.expected_positive_part(offset)
    return total


class ExpectedTailLruPolicy(CachePolicy):
    """ET-LRU: greedy single-block eviction by belief-weighted excess risk."""

    family = PolicyFamily.ETLRU

    def admit(self, state: CacheState, event: TurnEvent, context: EvictionContext) -> int:
        return state.entry(event.conversation_id).history_blocks

    def evict(self, state: CacheState, context: EvictionContext, overflow: int) -> EvictionDecision:
        return etlru_evict(state, context.now, overflow, self.config, exclude=context.pinned)
