"""Clairvoyant pre-pass over a trace."""

from __future__ import annotations

import math
from typing import NamedTuple

from tailcache.models.trace import Trace


class NextArrival(NamedTuple):
    """Next request of a conversation; timestamp is inf if it never returns."""

    timestamp: float
    prompt_blocks: int | None

    @property
    def returns(self) -> bool:
        return not math.isinf(self.timestamp)


NEVER = NextArrival(math.inf, None)


class Lookahead:
    """Ground truth each event's conversation will reveal next.

    Built once per trace and read-only afterwards.

    Example:
        >>> lookahead = Lookahead.from_trace(trace)
        >>> lookahead.next_after(0)
        NextArrival(timestamp=3.0, prompt_blocks=100)
    """

    def __init__(self, following: list[NextArrival]) -> None:
        self._following = following

    @classmethod
    def from_trace(cls, trace: Trace) -> Lookahead:
        following: list[NextArrival] = [NEVER] * trace.horizon
        upcoming: dict[int, NextArrival] = {}
        for index in range(trace.horizon - 1, -1, -1):
            event = trace.events[index]
            following[index] = upcoming.get(event.conversation_id, NEVER)
            upcoming[event.conversation_id] = NextArrival(event.timestamp, event.prompt_blocks)
        return cls(following)

    def __len__(self) -> int:
        return len(self._following)

    def next_after(self, event_index: int) -> NextArrival:
        """Next arrival of the conversation that issued event `event_index`."""
        return self._following[event_index]

    def is_final(self, event_index: int) -> bool:
        """True if the event is its conversation's last turn in the trace."""
        return not self._following[event_index].returns
