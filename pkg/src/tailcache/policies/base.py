"""Eviction policy base class."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass, field

from tailcache.core.lookahead import NextArrival
from tailcache.core.state import CacheState
from tailcache.models import EvictionDecision, PolicyConfig, PolicyFamily, TurnEvent


@dataclass
class EvictionContext:
    """What a policy may see while handling one arrival.

    `future` is only populated for clairvoyant replays.
    """

    now: float
    arriving_id: int | None = None
    pinned: int | None = None  # forced mode: never evicted during this arrival
    future: Mapping[int, NextArrival] | None = field(default=None)


class CachePolicy(ABC):
    """Base class for eviction policies.

    A policy decides how much of the arriving conversation to keep after it
    is served and which blocks go when the cache overflows.

    Example:
        >>> class DropAll(CachePolicy):
        ...     family = PolicyFamily.LRU
        ...
        ...     def evict(self, state, context, overflow):
        ...         return lru_evict(state, overflow, exclude=context.pinned)
    """

    family: PolicyFamily

    def __init__(self, config: PolicyConfig) -> None:
        self.config = config

    @property
    def name(self) -> str:
        return self.config.name

    @property
    def is_clairvoyant(self) -> bool:
        """True if the policy reads the next-arrival map."""
        return False

    def admit(self, state: CacheState, event: TurnEvent, context: EvictionContext) -> int:
        """Blocks of the arriving conversation kept after serving (optional caching).

        Defaults to the whole history.
        """
        return state.entry(event.conversation_id).history_blocks

    def adjust(
        self, state: CacheState, event: TurnEvent, context: EvictionContext
    ) -> EvictionDecision:
        """Post-admission hook for variants; no-op by default."""
        return EvictionDecision()

    @abstractmethod
    def evict(self, state: CacheState, context: EvictionContext, overflow: int) -> EvictionDecision:
        """Remove at least `overflow` blocks from `state`.

        Args:
            state: Cache state, mutated in place
            context: Arrival being processed
            overflow: Blocks above capacity, always positive

        Returns:
            The evictions that were applied
        """
        ...
