"""Certify Tail-Optimized Belady against the exhaustive hindsight optimum."""

from __future__ import annotations

import logging

import numpy as np

from tailcache.exceptions import (
    CapacityInfeasibleError,
    ConfigurationError,
    InstanceTooLargeError,
)
from tailcache.models import (
    CachingMode,
    HindsightInstance,
    HindsightTurn,
    OracleBounds,
    OracleCheckReport,
    OracleMismatch,
    PolicyConfig,
    PolicyFamily,
)
from tailcache.oracle import ORACLE_LIMITS, solve_hindsight_tel
from tailcache.sim.replay import excess_blocks, replay

logger = logging.getLogger(__name__)


def check_oracle_bounds(bounds: OracleBounds) -> None:
    """Reject generator bounds the exhaustive solver cannot take."""
    for field in ("max_conversations", "max_steps", "max_capacity", "max_turn_blocks"):
        value = getattr(bounds, field)
        limit = getattr(ORACLE_LIMITS, field)
        if value > limit:
            raise InstanceTooLargeError(field, value, limit)


def _random_turns(rng: np.random.Generator, bounds: OracleBounds) -> list[list[HindsightTurn]]:
    steps = int(rng.integers(1, bounds.max_steps + 1))
    conversations = int(rng.integers(1, bounds.max_conversations + 1))
    owners = rng.integers(0, conversations, size=steps)

    relabel: dict[int, int] = {}
    turns: list[list[HindsightTurn]] = []
    for step, owner in enumerate(owners.tolist()):
        index = relabel.setdefault(owner, len(relabel))
        if index == len(turns):
            turns.append([])
        turns[index].append(
            HindsightTurn(
                step=step,
                prompt_blocks=int(rng.integers(1, bounds.max_turn_blocks + 1)),
                response_blocks=int(rng.integers(0, bounds.max_turn_blocks + 1)),
            )
        )
    return turns


def largest_served_history(turns: list[list[HindsightTurn]]) -> int:
    """Largest history right after serving a turn; forced caching needs C at least this."""
    return max(
        (
            sum(t.prompt_blocks + t.response_blocks for t in conversation)
            for conversation in turns
        ),
        default=0,
    )


def random_instance(
    rng: np.random.Generator,
    bounds: OracleBounds,
    mode: CachingMode = CachingMode.OPTIONAL,
) -> HindsightInstance:
    """One micro-instance drawn uniformly within `bounds`.

    Conversations are numbered by first arrival and every prompt is at
    least one block. Forced-mode instances are always feasible: turns are
    redrawn until every served history fits in `max_capacity`, and the
    capacity is drawn from the feasible range.
    """
    if mode == CachingMode.FORCED and bounds.max_capacity < 1:
        raise ConfigurationError(
            "forced caching needs max_capacity of at least one block", "max_capacity"
        )
    turns = _random_turns(rng, bounds)
    low = 0
    if mode == CachingMode.FORCED:
        while largest_served_history(turns) > bounds.max_capacity:
            turns = _random_turns(rng, bounds)
        low = largest_served_history(turns)
    return HindsightInstance(
        capacity=int(rng.integers(low, bounds.max_capacity + 1)),
        xi_blocks=int(rng.integers(0, bounds.max_xi_blocks + 1)),
        conversations=turns,
        mode=mode,
    )


def belady_tel_blocks(instance: HindsightInstance) -> int:
    """TEL (blocks) of a clairvoyant Tail-Optimized Belady replay of the instance."""
    config = PolicyConfig(
        family=PolicyFamily.TAIL_BELADY,
        xi_blocks=instance.xi_blocks,
        caching_mode=instance.mode,
    )
    result = replay(instance.to_trace(), config, instance.capacity)
    return excess_blocks(result.records, instance.xi_blocks)


def oracle_check(
    count: int,
    bounds: OracleBounds | None = None,
    seed: int = 0,
    mode: CachingMode = CachingMode.OPTIONAL,
) -> OracleCheckReport:
    """Compare Belady replay TEL with the hindsight optimum on `count` random instances.

    Forced-mode instances where caching a served history is impossible are
    skipped and counted. Mismatches are report content, not errors.

    Example:
        >>> report = oracle_check(200, seed=1)
        >>> report.is_clean
        True
    """
    bounds = bounds or OracleBounds()
    check_oracle_bounds(bounds)
    rng = np.random.default_rng(seed)
    report = OracleCheckReport(requested=count, checked=0, mode=mode, seed=seed)

    for _ in range(count):
        instance = random_instance(rng, bounds, mode)
        try:
            optimal = solve_hindsight_tel(instance).tel_blocks
            achieved = belady_tel_blocks(instance)
        except CapacityInfeasibleError:
            report.skipped_infeasible += 1
            continue
        report.checked += 1
        if achieved != optimal:
            logger.warning(
                f"Belady TEL {achieved} != optimum {optimal} on instance "
                f"{instance.model_dump_json()}"
            )
            report.mismatches.append(
                OracleMismatch(
                    instance=instance, policy_tel_blocks=achieved, optimal_tel_blocks=optimal
                )
            )

    logger.info(
        f"Oracle check ({mode.value}, seed={seed}): {report.checked} checked, "
        f"{report.skipped_infeasible} skipped, {len(report.mismatches)} mismatches"
    )
    return report
