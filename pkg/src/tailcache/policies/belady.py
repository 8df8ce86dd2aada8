"""Tail-Optimized Belady, the clairvoyant hindsight-optimal policy."""

from __future__ import annotations

import logging
from collections.abc import Mapping

from tailcache.core.lookahead import NextArrival
from tailcache.core.state import CacheState
from tailcache.exceptions import ClairvoyanceError
from tailcache.models import EvictionDecision, EvictionPhase, PolicyConfig, PolicyFamily
from tailcache.policies.base import CachePolicy, EvictionContext
from tailcache.policies.tlru import tel_safe_budget

logger = logging.getLogger(__name__)


def _furthest_first(cid: int, future: Mapping[int, NextArrival]) -> tuple[float, int]:
    return (-future[cid].timestamp, cid)


def belady_evict(
    state: CacheState,
    future: Mapping[int, NextArrival] | None,
    config: PolicyConfig,
    overflow: int,
    *,
    exclude: int | None = None,
) -> EvictionDecision:
    """Cap every conversation at its exact TEL-safe budget, then evict furthest-in-future.

    The cap uses the true next prompt; a conversation that never returns has
    budget 0. Whatever overflow survives the cap is taken from the
    conversation whose next request comes last, ties by conversation id.

    Example:
        >>> future = {0: NextArrival(5.0, 1), 1: NextArrival(3.0, 1), 2: NEVER}
        >>> belady_evict(state, future, config, overflow=9).sequence()
        [(2, 3), (0, 3), (1, 3)]

    Raises:
        ClairvoyanceError: If a cached conversation has no next-arrival entry
    """
    if future is None:
        raise ClairvoyanceError("Tail-Optimized Belady needs the next-arrival map")
    occupied = [e.conversation_id for e in state.occupied(exclude)]
    for cid in occupied:
        if cid not in future:
            raise ClairvoyanceError(
                f"no next-arrival entry for conversation {cid}", conversation_id=cid
            )
    ordered = sorted(occupied, key=lambda cid: _furthest_first(cid, future))

    decision = EvictionDecision()
    for cid in ordered:
        entry = state.entries[cid]
        upcoming = future[cid]
        budget = (
            tel_safe_budget(entry.history_blocks, upcoming.prompt_blocks or 0, config.xi_blocks)
            if upcoming.returns
            else 0
        )
        surplus = entry.cached_blocks - budget
        if surplus > 0:
            decision.add(cid, state.evict(cid, surplus), EvictionPhase.TEL_SAFE_TRIM)

    remaining = overflow - decision.total_blocks
    for cid in ordered:
        if remaining <= 0:
            break
        taken = state.evict(cid, remaining)
        decision.add(cid, taken, EvictionPhase.BELADY)
        remaining -= taken

    if remaining > 0:
        logger.warning(f"Belady eviction left {remaining} blocks of overflow unresolved")
    return decision


class TailBeladyPolicy(CachePolicy):
    """Clairvoyant benchmark; only runs inside a trace replay."""

    family = PolicyFamily.TAIL_BELADY

    @property
    def is_clairvoyant(self) -> bool:
        return True

    def evict(self, state: CacheState, context: EvictionContext, overflow: int) -> EvictionDecision:
        return belady_evict(state, context.future, self.config, overflow, exclude=context.pinned)
