"""Least-recently-used eviction and its threshold-admission variant."""

from __future__ import annotations

import logging

from tailcache.core.state import CacheState
from tailcache.models import EvictionDecision, EvictionPhase, PolicyFamily, TurnEvent
from tailcache.policies.base import CachePolicy, EvictionContext

logger = logging.getLogger(__name__)


def recency_key(state: CacheState, conversation_id: int) -> tuple[float, int]:
    """Eviction order key: older tau first, then lower conversation id."""
    return (state.entries[conversation_id].last_turn_timestamp, conversation_id)


def lru_evict(
    state: CacheState,
    overflow: int,
    *,
    exclude: int | None = None,
    phase: EvictionPhase = EvictionPhase.LRU_FALLBACK,
) -> EvictionDecision:
    """Evict `overflow` blocks, least recently used conversation first.

    Free-marked blocks count as infinitely old and are taken before any
    other block, again oldest conversation first.

    Example:
        >>> decision = lru_evict(state, 4)
        >>> decision.sequence()
        [(0, 3), (1, 1)]
    """
    decision = EvictionDecision()
    remaining = overflow
    ordered = sorted(
        (e.conversation_id for e in state.occupied(exclude)),
        key=lambda cid: recency_key(state, cid),
    )

    for cid in ordered:
        if remaining <= 0:
            break
        free = state.entries[cid].free_marked_blocks
        if free:
            taken = state.evict(cid, min(free, remaining))
            decision.add(cid, taken, EvictionPhase.TEL_SAFE_TRIM)
            remaining -= taken

    for cid in ordered:
        if remaining <= 0:
            break
        taken = state.evict(cid, remaining)
        decision.add(cid, taken, phase)
        remaining -= taken

    if remaining > 0:
        logger.warning(f"LRU eviction left {remaining} blocks of overflow unresolved")
    return decision


class LruPolicy(CachePolicy):
    """Cache every served history; evict least recently used first."""

    family = PolicyFamily.LRU

    def evict(self, state: CacheState, context: EvictionContext, overflow: int) -> EvictionDecision:
        return lru_evict(state, overflow, exclude=context.pinned)


class ThresholdLruPolicy(LruPolicy):
    """LRU that only caches histories of at least `cache_threshold_blocks` blocks."""

    family = PolicyFamily.THRESHOLD_LRU

    def admit(self, state: CacheState, event: TurnEvent, context: EvictionContext) -> int:
        history = state.entry(event.conversation_id).history_blocks
        if history >= self.config.cache_threshold_blocks:
            return history
        logger.debug(
            f"conversation {event.conversation_id} below admission threshold "
            f"({history} < {self.config.cache_threshold_blocks})"
        )
        return 0
