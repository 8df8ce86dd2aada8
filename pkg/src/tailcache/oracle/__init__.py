"""Exact hindsight oracle for micro-instances."""

from tailcache.oracle.hindsight import (
    ORACLE_LIMITS,
    check_bounds,
    check_schedule,
    evaluate_schedule,
    solve_hindsight_tel,
    step_cost,
)
from tailcache.oracle.reduction import (
    clamp_to_budgets,
    hit_equivalence_value,
    tel_constant,
    verify_budget_cap,
)
from tailcache.oracle.io import load_instance, save_solution

__all__ = [
    "ORACLE_LIMITS",
    "check_bounds",
    "check_schedule",
    "evaluate_schedule",
    "solve_hindsight_tel",
    "step_cost",
    "clamp_to_budgets",
    "hit_equivalence_value",
    "tel_constant",
    "verify_budget_cap",
    "load_instance",
    "save_solution",
]
