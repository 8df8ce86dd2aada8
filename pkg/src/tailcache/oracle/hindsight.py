"""Exhaustive solver for the hindsight TEL integer program.

Decision variables are the cached block counts x_i before every arrival.
Between arrivals only the arriving conversation may grow (up to its new
history, or exactly to it under forced caching); every other conversation
may only shrink, and the total never exceeds the capacity. The solver runs a
dynamic program over cache vectors, which visits every feasible schedule's
state sequence, so its optimum equals full enumeration.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence

from tailcache.exceptions import CapacityInfeasibleError, InstanceTooLargeError, ScheduleError
from tailcache.models import (
    Arrival,
    CachingMode,
    HindsightInstance,
    HindsightSolution,
    OracleBounds,
)

logger = logging.getLogger(__name__)

ORACLE_LIMITS = OracleBounds()

CacheVector = tuple[int, ...]


def check_bounds(instance: HindsightInstance, limits: OracleBounds = ORACLE_LIMITS) -> None:
    """Reject instances the exhaustive search is not meant for.

    Capacity is judged after clamping to the instance's total blocks.
    """
    for field, value, limit in (
        ("conversations", instance.num_conversations, limits.max_conversations),
        ("steps", instance.num_steps, limits.max_steps),
        ("capacity", instance.effective_capacity, limits.max_capacity),
        ("turn_blocks", instance.max_turn_blocks, limits.max_turn_blocks),
    ):
        if value > limit:
            raise InstanceTooLargeError(field, value, limit)


def step_cost(arrival: Arrival, cached: int, xi_blocks: int) -> int:
    """Excess blocks of one request: max(L + q - x - xi, 0)."""
    return max(arrival.job_blocks - cached - xi_blocks, 0)


def _successors(
    vector: CacheVector,
    arrival: Arrival,
    capacity: int,
    mode: CachingMode,
) -> Iterator[CacheVector]:
    """Cache vectors reachable right after serving `arrival`."""
    theta = arrival.conversation_id
    history = arrival.history_blocks + arrival.prompt_blocks + arrival.response_blocks
    if mode == CachingMode.FORCED:
        own: Sequence[int] = [history] if history <= capacity else []
    else:
        own = range(min(history, capacity) + 1)

    ranges = [own if i == theta else range(x + 1) for i, x in enumerate(vector)]
    for candidate in itertools.product(*ranges):
        if sum(candidate) <= capacity:
            yield candidate


def solve_hindsight_tel(
    instance: HindsightInstance,
    limits: OracleBounds = ORACLE_LIMITS,
) -> HindsightSolution:
    """Globally optimal TEL (in blocks) and one schedule attaining it.

    Ties between equally good schedules go to the lexicographically
    smallest state at each step, so the output is deterministic.

    Raises:
        InstanceTooLargeError: If the instance exceeds the search limits
        CapacityInfeasibleError: Forced caching of a history larger than C
            before the final arrival

    Example:
        >>> solution = solve_hindsight_tel(instance)
        >>> solution.tel_blocks
        4
    """
    check_bounds(instance, limits)
    arrivals = instance.arrivals()
    if not arrivals:
        return HindsightSolution(schedule=[], tel_blocks=0, states_enumerated=[])

    capacity = instance.effective_capacity
    start: CacheVector = (0,) * instance.num_conversations
    # layers[k] maps the vector before arrival k to (best cost so far, predecessor)
    layers: list[dict[CacheVector, tuple[int, CacheVector | None]]] = [{start: (0, None)}]

    for k, arrival in enumerate(arrivals[:-1]):
        following: dict[CacheVector, tuple[int, CacheVector | None]] = {}
        for vector in sorted(layers[k]):
            cost = layers[k][vector][0] + step_cost(
                arrival, vector[arrival.conversation_id], instance.xi_blocks
            )
            for successor in _successors(vector, arrival, capacity, instance.mode):
                best = following.get(successor)
                if best is None or cost < best[0]:
                    following[successor] = (cost, vector)
        if not following:
            history = arrival.history_blocks + arrival.prompt_blocks + arrival.response_blocks
            raise CapacityInfeasibleError(
                arrival.conversation_id, history, instance.capacity, event_index=k
            )
        layers.append(following)

    last = arrivals[-1]
    final_cost, final_vector = min(
        (cost + step_cost(last, vector[last.conversation_id], instance.xi_blocks), vector)
        for vector, (cost, _) in layers[-1].items()
    )

    schedule: list[CacheVector] = [final_vector]
    for k in range(len(layers) - 1, 0, -1):
        predecessor = layers[k][schedule[-1]][1]
        assert predecessor is not None
        schedule.append(predecessor)
    schedule.reverse()

    logger.debug(
        f"hindsight optimum {final_cost} over {sum(len(layer) for layer in layers)} states"
    )
    return HindsightSolution(
        schedule=[list(v) for v in schedule],
        tel_blocks=final_cost,
        states_enumerated=[len(layer) for layer in layers],
    )


def evaluate_schedule(instance: HindsightInstance, schedule: Sequence[Sequence[int]]) -> int:
    """TEL (in blocks) of a schedule; feasibility is not checked."""
    arrivals = instance.arrivals()
    if len(schedule) != len(arrivals):
        raise ScheduleError(
            f"schedule has {len(schedule)} steps, instance has {len(arrivals)} arrivals"
        )
    return sum(
        step_cost(a, schedule[k][a.conversation_id], instance.xi_blocks)
        for k, a in enumerate(arrivals)
    )


def check_schedule(instance: HindsightInstance, schedule: Sequence[Sequence[int]]) -> None:
    """Raise ScheduleError unless `schedule` satisfies every program constraint."""
    arrivals = instance.arrivals()
    if len(schedule) != len(arrivals):
        raise ScheduleError(
            f"schedule has {len(schedule)} steps, instance has {len(arrivals)} arrivals"
        )
    n = instance.num_conversations
    for k, vector in enumerate(schedule):
        if len(vector) != n:
            raise ScheduleError(f"step {k} has {len(vector)} entries, expected {n}", step=k)
        if any(x < 0 for x in vector):
            raise ScheduleError(f"step {k} caches a negative block count", step=k)
        if sum(vector) > instance.capacity:
            raise ScheduleError(
                f"step {k} caches {sum(vector)} blocks, capacity is {instance.capacity}", step=k
            )
    if schedule and any(schedule[0]):
        raise ScheduleError("the cache must start empty", step=0)

    for k in range(len(arrivals) - 1):
        arrival = arrivals[k]
        theta = arrival.conversation_id
        history = arrival.history_blocks + arrival.prompt_blocks + arrival.response_blocks
        before, after = schedule[k], schedule[k + 1]
        for i in range(n):
            if i != theta and after[i] > before[i]:
                raise ScheduleError(
                    f"conversation {i} grows between steps {k} and {k + 1} without arriving",
                    step=k + 1,
                )
        if after[theta] > history:
            raise ScheduleError(
                f"conversation {theta} caches {after[theta]} of {history} history blocks",
                step=k + 1,
            )
        if instance.mode == CachingMode.FORCED and after[theta] != history:
            raise ScheduleError(
                f"forced caching requires conversation {theta} to keep all {history} blocks",
                step=k + 1,
            )
