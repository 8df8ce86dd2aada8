"""Trace builders shared by the test modules."""

import random

from tailcache.models import Trace, TurnEvent


def make_trace(*turns: tuple[int, float, int, int], flags: bool = False) -> Trace:
    """Trace from (conversation_id, timestamp, prompt, response) tuples.

    With `flags`, each conversation's last listed turn is marked terminal.
    """
    last = {cid: index for index, (cid, *_rest) in enumerate(turns)}
    events = [
        TurnEvent(
            conversation_id=cid,
            timestamp=ts,
            prompt_blocks=q,
            response_blocks=a,
            is_last_turn=(last[cid] == index) if flags else None,
        )
        for index, (cid, ts, q, a) in enumerate(turns)
    ]
    return Trace.from_events(events)


def random_trace(
    rng: random.Random,
    *,
    conversations: int = 4,
    turns: int = 12,
    max_blocks: int = 6,
    flags: bool = False,
) -> Trace:
    """Small random trace with one arrival per second, conversations numbered by first arrival."""
    rows = [
        (rng.randrange(conversations), float(step), rng.randint(1, max_blocks),
         rng.randint(0, max_blocks))
        for step in range(turns)
    ]
    seen: dict[int, int] = {}
    dense = [(seen.setdefault(cid, len(seen)), ts, q, a) for cid, ts, q, a in rows]
    return make_trace(*dense, flags=flags)
