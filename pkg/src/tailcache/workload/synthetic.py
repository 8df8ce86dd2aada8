"""Birth-death conversation workload generator.

Random streams are split with numpy's SeedSequence: the birth clock draws
from spawn key (0,), conversation k from spawn key (1, k). A conversation's
lifetime, turn gaps and lengths therefore depend only on the root seed and
its birth index, never on how its turns interleave with others.
"""

from __future__ import annotations

import heapq
import logging

import numpy as np

from tailcache.models import PromptLengthDistribution, SyntheticParams, Trace, TurnEvent

logger = logging.getLogger(__name__)

BIRTH_STREAM = 0
CONVERSATION_STREAM = 1


def birth_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(BIRTH_STREAM,)))


def conversation_rng(seed: int, conversation_id: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(CONVERSATION_STREAM, conversation_id))
    )


def _draw(dist: PromptLengthDistribution, rng: np.random.Generator) -> int:
    return int(dist.sample(rng, 1)[0])


class _EarliestTimestamps:
    """Keeps the `limit` smallest timestamps seen so far."""

    def __init__(self, limit: int) -> None:
        self.limit = limit
        self._heap: list[float] = []  # negated, so heap[0] is the largest kept

    @property
    def cutoff(self) -> float:
        """Timestamp beyond which nothing can make the final trace."""
        if len(self._heap) < self.limit:
            return float("inf")
        return -self._heap[0]

    def push(self, timestamp: float) -> None:
        if len(self._heap) < self.limit:
            heapq.heappush(self._heap, -timestamp)
        elif timestamp < -self._heap[0]:
            heapq.heapreplace(self._heap, -timestamp)


def conversation_turns(
    params: SyntheticParams,
    conversation_id: int,
    birth: float,
    horizon: float = float("inf"),
) -> list[TurnEvent]:
    """Turns of one conversation born at `birth`, stopping at death or `horizon`.

    The first turn is emitted at birth.
    """
    rng = conversation_rng(params.seed, conversation_id)
    death = birth + rng.exponential(1.0 / params.death_rate)
    turn_rate = params.turn_rate_for(conversation_id)

    turns: list[TurnEvent] = []
    timestamp = birth
    while timestamp <= death and timestamp <= horizon:
        turns.append(
            TurnEvent(
                conversation_id=conversation_id,
                timestamp=float(timestamp),
                prompt_blocks=_draw(params.prompt_length_dist, rng),
                response_blocks=_draw(params.response_length_dist, rng),
                is_last_turn=False,
            )
        )
        timestamp += rng.exponential(1.0 / turn_rate)
    return turns


def _mark_last_turns(events: list[TurnEvent]) -> list[TurnEvent]:
    last_index: dict[int, int] = {}
    for index, event in enumerate(events):
        last_index[event.conversation_id] = index
    final = set(last_index.values())
    return [
        e.model_copy(update={"is_last_turn": index in final}) for index, e in enumerate(events)
    ]


def generate_synthetic(params: SyntheticParams) -> Trace:
    """Sample a trace from the stochastic conversation model.

    Conversations are born by an exponential(lambda_conv) clock, live an
    exponential(mu) time, and emit turns by an exponential(turn_rate) clock
    while alive. The trace holds the `max_events` earliest turns; each
    conversation's last turn in it carries is_last_turn=True.

    Example:
        >>> trace = generate_synthetic(sharegpt_preset(seed=3))
        >>> trace.horizon
        2000
    """
    births = birth_rng(params.seed)
    earliest = _EarliestTimestamps(params.max_events)
    events: list[TurnEvent] = []

    birth = births.exponential(1.0 / params.conversation_birth_rate)
    conversation_id = 0
    while birth <= earliest.cutoff:
        if params.max_conversations is not None and conversation_id >= params.max_conversations:
            break
        for turn in conversation_turns(params, conversation_id, float(birth), earliest.cutoff):
            earliest.push(turn.timestamp)
            events.append(turn)
        conversation_id += 1
        birth += births.exponential(1.0 / params.conversation_birth_rate)

    events.sort(key=lambda e: (e.timestamp, e.conversation_id))
    kept = _mark_last_turns(events[: params.max_events])

    trace = Trace(events=tuple(kept), block_size=params.block_size)
    logger.info(
        f"Generated {trace.horizon} turns from {len(trace.conversation_ids)} conversations "
        f"(seed={params.seed})"
    )
    return trace
