"""Budget caps and the hit-maximisation form of the TEL program.

For schedules that never cache more than the TEL-safe budget at an arrival,
TEL = sum_t (L + q - xi)^+ - sum_t x_theta(t), so minimising TEL is the same
as maximising cached blocks at arrivals.
"""

from __future__ import annotations

from collections.abc import Sequence

from tailcache.exceptions import ScheduleError
from tailcache.models import CachingMode, HindsightInstance, HindsightSolution
from tailcache.oracle.hindsight import check_schedule, evaluate_schedule


def tel_constant(instance: HindsightInstance) -> int:
    """sum over arrivals of (L + q - xi)^+, the TEL of caching nothing."""
    return sum(instance.budget(a) for a in instance.arrivals())


def clamp_to_budgets(
    instance: HindsightInstance, schedule: Sequence[Sequence[int]]
) -> list[list[int]]:
    """Cap every x_i at the budget of conversation i's next arrival.

    Steps after a conversation's last arrival are left alone.
    """
    clamped = [list(v) for v in schedule]
    arrivals = instance.arrivals()
    window_start = [0] * instance.num_conversations
    for k, arrival in enumerate(arrivals):
        theta = arrival.conversation_id
        budget = instance.budget(arrival)
        for step in range(window_start[theta], k + 1):
            clamped[step][theta] = min(clamped[step][theta], budget)
        window_start[theta] = k + 1
    return clamped


def verify_budget_cap(solution: HindsightSolution, instance: HindsightInstance) -> bool:
    """True if clamping the schedule to budgets keeps it feasible and equally good.

    Budget capping is an optional-caching argument, so the clamped schedule
    is checked against the optional-caching rules.

    Raises:
        ScheduleError: If the given schedule is itself infeasible
    """
    check_schedule(instance, solution.schedule)
    clamped = clamp_to_budgets(instance, solution.schedule)
    relaxed = instance.model_copy(update={"mode": CachingMode.OPTIONAL})
    try:
        check_schedule(relaxed, clamped)
    except ScheduleError:
        return False
    return evaluate_schedule(instance, clamped) == evaluate_schedule(instance, solution.schedule)


def hit_equivalence_value(instance: HindsightInstance, schedule: Sequence[Sequence[int]]) -> int:
    """sum of x_theta at each arrival, for a budget-capped schedule.

    Raises:
        ScheduleError: If some arrival finds more than its budget cached
    """
    total = 0
    for k, arrival in enumerate(instance.arrivals()):
        cached = schedule[k][arrival.conversation_id]
        budget = instance.budget(arrival)
        if cached > budget:
            raise ScheduleError(
                f"conversation {arrival.conversation_id} has {cached} blocks cached at step {k}, "
                f"above its budget {budget}",
                step=k,
            )
        total += cached
    return total
