"""Tail-Optimized LRU and its End-Aware and Length-Aware variants."""

from __future__ import annotations

import logging
from collections.abc import Mapping

from tailcache.core.lookahead import NextArrival
from tailcache.core.state import CacheState
from tailcache.exceptions import ClairvoyanceError, ConfigurationError
from tailcache.models import (
    EvictionDecision,
    EvictionPhase,
    PolicyConfig,
    PolicyFamily,
    TurnEvent,
)
from tailcache.policies.base import CachePolicy, EvictionContext
from tailcache.policies.lru import lru_evict, recency_key

logger = logging.getLogger(__name__)


def tel_safe_budget(history_blocks: int, next_prompt_blocks: int, xi_blocks: int) -> int:
    """max(L + Q - xi, 0): blocks beyond this cannot lower the next request's excess.

    Example:
        >>> tel_safe_budget(100, 100, 150)
        50
    """
    return max(history_blocks + next_prompt_blocks - xi_blocks, 0)


def next_prompt_estimates(
    state: CacheState,
    config: PolicyConfig,
    future: Mapping[int, NextArrival] | None = None,
) -> dict[int, int]:
    """Q-hat per cached conversation.

    Length-Aware reads the true next prompt from `future` (0 if the
    conversation never returns); the other variants use the configured
    estimate.
    """
    if config.family == PolicyFamily.LENGTH_AWARE_TLRU:
        if future is None:
            raise ClairvoyanceError("Length-Aware T-LRU needs the next-arrival map")
        estimates: dict[int, int] = {}
        for cid in state.entries:
            if cid not in future:
                raise ClairvoyanceError(
                    f"no next-arrival entry for conversation {cid}", conversation_id=cid
                )
            estimates[cid] = future[cid].prompt_blocks or 0
        return estimates

    if config.q_hat_blocks is None:
        raise ConfigurationError(
            f"{config.name} needs a next-prompt estimate",
            "q_hat_blocks",
            suggestion="Set q_hat_blocks or replay a trace so it defaults to the mean prompt",
        )
    return {cid: config.q_hat_blocks for cid in state.entries}


def tlru_trim(
    state: CacheState,
    config: PolicyConfig,
    *,
    exclude: int | None = None,
    future: Mapping[int, NextArrival] | None = None,
) -> EvictionDecision:
    """Resolve the current overflow the Tail-Optimized LRU way.

    Phase 1 marks every cached block above the conversation's TEL-safe
    budget as free and evicts free blocks, oldest conversation first, until
    the cache fits. Phase 2 hands any remaining overflow to LRU.

    Example:
        >>> decision = tlru_trim(state, PolicyConfig(family=PolicyFamily.TLRU,
        ...                                          xi_blocks=150, q_hat_blocks=100))
        >>> state.snapshot()
        {0: 50, 1: 50}
    """
    decision = EvictionDecision()
    overflow = state.overflow
    if overflow <= 0:
        return decision

    estimates = next_prompt_estimates(state, config, future)
    for entry in state.occupied(exclude):
        budget = tel_safe_budget(
            entry.history_blocks, estimates[entry.conversation_id], config.xi_blocks
        )
        entry.free_marked_blocks = max(entry.cached_blocks - budget, 0)

    oldest_first = sorted(
        (e.conversation_id for e in state.occupied(exclude)),
        key=lambda cid: recency_key(state, cid),
    )
    for cid in oldest_first:
        if overflow <= 0:
            break
        free = state.entries[cid].free_marked_blocks
        if free:
            taken = state.evict(cid, min(free, overflow))
            decision.add(cid, taken, EvictionPhase.TEL_SAFE_TRIM)
            overflow -= taken

    if overflow > 0:
        decision.extend(lru_evict(state, overflow, exclude=exclude))
    return decision


def variant_adjust(
    state: CacheState,
    event: TurnEvent,
    config: PolicyConfig,
) -> EvictionDecision:
    """Drop a terminating conversation's whole cache right after serving it.

    Applies to End-Aware and Length-Aware T-LRU; a continuing turn is left
    to the regular trimming.

    Raises:
        ConfigurationError: If the trace carries no termination flags
    """
    decision = EvictionDecision()
    if config.family not in (PolicyFamily.END_AWARE_TLRU, PolicyFamily.LENGTH_AWARE_TLRU):
        return decision
    if event.is_last_turn is None:
        raise ConfigurationError(
            f"{config.name} needs is_last_turn on every event",
            "is_last_turn",
            suggestion="Use a trace that records conversation termination",
        )

    entry = state.entry(event.conversation_id)
    entry.returns_flag = not event.is_last_turn
    if not entry.returns_flag and entry.cached_blocks:
        removed = state.evict(event.conversation_id, entry.cached_blocks)
        decision.add(event.conversation_id, removed, EvictionPhase.TERMINATED)
        logger.debug(f"conversation {event.conversation_id} terminated, dropped {removed} blocks")
    return decision


class TailOptimizedLruPolicy(CachePolicy):
    """T-LRU: free eviction of blocks above the TEL-safe budget, then LRU.

    The same class serves the End-Aware and Length-Aware variants, which
    differ only in `adjust` and in where the next-prompt estimate comes from.
    """

    family = PolicyFamily.TLRU

    @property
    def is_clairvoyant(self) -> bool:
        return self.config.family == PolicyFamily.LENGTH_AWARE_TLRU

    def adjust(
        self, state: CacheState, event: TurnEvent, context: EvictionContext
    ) -> EvictionDecision:
        return variant_adjust(state, event, self.config)

    def evict(self, state: CacheState, context: EvictionContext, overflow: int) -> EvictionDecision:
        return tlru_trim(state, self.config, exclude=context.pinned, future=context.future)
