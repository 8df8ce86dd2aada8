"""Mutable cache state shared by every eviction policy."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from tailcache.exceptions import ConfigurationError, InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass
class CacheEntry:
    """Per-conversation cache bookkeeping."""

    conversation_id: int
    history_blocks: int = 0  # L_i
    cached_blocks: int = 0  # X_i
    last_turn_timestamp: float = 0.0  # tau_i
    free_marked_blocks: int = 0  # blocks treated as infinitely old
    turn_count: int = 0
    belief_rate: float | None = None  # lambda_i at the last ET-LRU scoring
    returns_flag: bool | None = None  # End-Aware only

    @property
    def retained_blocks(self) -> int:
        """Cached blocks that are not marked free."""
        return self.cached_blocks - self.free_marked_blocks


@dataclass
class CacheState:
    """Cached block counts of every conversation seen so far.

    Blocks within a conversation are fungible; only the counts matter.

    Example:
        >>> state = CacheState(capacity=100)
        >>> state.entry(0).cached_blocks = 80
        >>> state.overflow
        0
    """

    capacity: int
    entries: dict[int, CacheEntry] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.capacity < 0:
            raise ConfigurationError(
                f"cache capacity must be non-negative, got {self.capacity}", "capacity"
            )

    def entry(self, conversation_id: int) -> CacheEntry:
        """Entry of a conversation, created empty on first access."""
        existing = self.entries.get(conversation_id)
        if existing is None:
            existing = CacheEntry(conversation_id)
            self.entries[conversation_id] = existing
        return existing

    def cached(self, conversation_id: int) -> int:
        existing = self.entries.get(conversation_id)
        return existing.cached_blocks if existing is not None else 0

    @property
    def total_cached(self) -> int:
        return sum(e.cached_blocks for e in self.entries.values())

    @property
    def overflow(self) -> int:
        """Blocks that must go before the capacity constraint holds again."""
        return max(self.total_cached - self.capacity, 0)

    def occupied(self, exclude: int | None = None) -> list[CacheEntry]:
        """Entries holding at least one block, minus an optional pinned one."""
        return [
            e
            for e in self.entries.values()
            if e.cached_blocks > 0 and e.conversation_id != exclude
        ]

    def evict(self, conversation_id: int, blocks: int) -> int:
        """Drop up to `blocks` blocks of one conversation; free-marked ones go first.

        Returns:
            Number of blocks actually removed.
        """
        if blocks < 0:
            raise InvalidArgumentError("cannot evict a negative block count", "blocks", blocks)
        entry = self.entry(conversation_id)
        removed = min(blocks, entry.cached_blocks)
        entry.cached_blocks -= removed
        entry.free_marked_blocks = max(entry.free_marked_blocks - removed, 0)
        entry.free_marked_blocks = min(entry.free_marked_blocks, entry.cached_blocks)
        return removed

    def snapshot(self) -> dict[int, int]:
        """Cached block count per conversation."""
        return {cid: e.cached_blocks for cid, e in sorted(self.entries.items())}

    def check_invariants(self) -> list[str]:
        """Describe every violated state invariant; empty when the state is sound."""
        problems: list[str] = []
        if self.total_cached > self.capacity:
            problems.append(f"cached total {self.total_cached} exceeds capacity {self.capacity}")
        for cid, e in sorted(self.entries.items()):
            if e.cached_blocks < 0:
                problems.append(f"conversation {cid} caches a negative block count")
            if e.cached_blocks > e.history_blocks:
                problems.append(
                    f"conversation {cid} caches {e.cached_blocks} blocks of a "
                    f"{e.history_blocks}-block history"
                )
            if not 0 <= e.free_marked_blocks <= e.cached_blocks:
                problems.append(
                    f"conversation {cid} has {e.free_marked_blocks} free marks on "
                    f"{e.cached_blocks} cached blocks"
                )
        return problems
