"""Tests for the hindsight oracle."""

import json

import numpy as np
import pytest

from tailcache.exceptions import (
    CapacityInfeasibleError,
    ConfigurationError,
    InstanceTooLargeError,
    ScheduleError,
)
from tailcache.models import CachingMode, HindsightInstance, HindsightTurn, OracleBounds
from tailcache.oracle import (
    check_schedule,
    clamp_to_budgets,
    evaluate_schedule,
    hit_equivalence_value,
    load_instance,
    save_solution,
    solve_hindsight_tel,
    step_cost,
    tel_constant,
    verify_budget_cap,
)
from tailcache.sim import random_instance


def _instance(capacity: int, xi: int, *conversations, mode=CachingMode.OPTIONAL):
    """Instance from per-conversation lists of (step, prompt, response)."""
    return HindsightInstance(
        capacity=capacity,
        xi_blocks=xi,
        conversations=[
            [HindsightTurn(step=s, prompt_blocks=q, response_blocks=a) for s, q, a in turns]
            for turns in conversations
        ],
        mode=mode,
    )


def _random_instances(count: int, seed: int, mode=CachingMode.OPTIONAL):
    rng = np.random.default_rng(seed)
    return [random_instance(rng, OracleBounds(), mode) for _ in range(count)]


class TestSolveHindsight:
    """Tests for solve_hindsight_tel."""

    def test_single_conversation(self):
        """Test two turns of one conversation with room for everything."""
        instance = _instance(10, 0, [(0, 2, 1), (1, 2, 1)])
        solution = solve_hindsight_tel(instance)
        assert solution.tel_blocks == 4
        assert solution.schedule == [[0], [3]]

    def test_threshold_above_every_job(self):
        """Test TEL is zero when xi covers the largest job."""
        instance = _instance(0, 20, [(0, 3, 3), (2, 3, 0)], [(1, 4, 0)])
        assert solve_hindsight_tel(instance).tel_blocks == 0

    def test_zero_capacity_is_constant(self):
        """Test an empty cache pays the full TEL constant."""
        instance = _instance(0, 1, [(0, 2, 1), (2, 2, 0)], [(1, 3, 0)])
        assert solve_hindsight_tel(instance).tel_blocks == tel_constant(instance)

    def test_contention(self):
        """Test only one revisit benefits when the cache holds a single history."""
        instance = _instance(3, 0, [(0, 3, 0), (2, 1, 0)], [(1, 3, 0), (3, 1, 0)])
        solution = solve_hindsight_tel(instance)
        # three cached blocks can save three blocks on one revisit, never on both
        assert solution.tel_blocks == 3 + 3 + 1 + 4
        check_schedule(instance, solution.schedule)
        assert evaluate_schedule(instance, solution.schedule) == solution.tel_blocks

    def test_deterministic_tie_break(self):
        """Test repeated solves return the same schedule."""
        instance = _instance(2, 0, [(0, 2, 0), (2, 1, 0)], [(1, 2, 0), (3, 1, 0)])
        assert solve_hindsight_tel(instance) == solve_hindsight_tel(instance)

    def test_empty_instance(self):
        """Test no arrivals cost nothing."""
        solution = solve_hindsight_tel(HindsightInstance(capacity=1, conversations=[]))
        assert solution.tel_blocks == 0
        assert solution.schedule == []

    def test_too_large(self):
        """Test instances beyond the search limits are refused."""
        instance = _instance(1, 0, [(0, 1, 0)], [(1, 1, 0)], [(2, 1, 0)], [(3, 1, 0)])
        with pytest.raises(InstanceTooLargeError) as exc_info:
            solve_hindsight_tel(instance)
        assert exc_info.value.field == "conversations"

    def test_capacity_above_total_blocks(self):
        """Test a capacity larger than every block of the instance is clamped, not refused."""
        small = _instance(10, 0, [(0, 2, 1), (1, 2, 1)])
        huge = small.model_copy(update={"capacity": 10**6})
        assert small.effective_capacity == 6
        assert solve_hindsight_tel(huge) == solve_hindsight_tel(small)
        assert solve_hindsight_tel(huge).tel_blocks == 4

    def test_capacity_too_large_after_clamping(self):
        """Test an instance whose clamped capacity is still above the limit is refused."""
        instance = _instance(9, 0, [(0, 4, 4), (1, 4, 0)])
        with pytest.raises(InstanceTooLargeError) as exc_info:
            solve_hindsight_tel(instance)
        assert exc_info.value.field == "capacity"

    def test_forced_caching(self):
        """Test forced caching keeps the whole served history."""
        instance = _instance(2, 0, [(0, 2, 0), (1, 1, 0)], mode=CachingMode.FORCED)
        solution = solve_hindsight_tel(instance)
        assert solution.tel_blocks == 3
        assert solution.schedule == [[0], [2]]

    def test_forced_infeasible(self):
        """Test forced caching of a history above capacity has no schedule."""
        instance = _instance(3, 0, [(0, 3, 1), (1, 1, 0)], mode=CachingMode.FORCED)
        with pytest.raises(CapacityInfeasibleError):
            solve_hindsight_tel(instance)

    def test_step_cost(self):
        """Test the per-arrival excess."""
        arrival = _instance(5, 1, [(0, 2, 1), (1, 3, 0)]).arrivals()[1]
        assert step_cost(arrival, 0, 1) == 5
        assert step_cost(arrival, 3, 1) == 2
        assert step_cost(arrival, 3, 9) == 0


class TestScheduleChecks:
    """Tests for check_schedule and evaluate_schedule."""

    def _two(self):
        return _instance(4, 0, [(0, 2, 0), (2, 1, 0)], [(1, 2, 0)])

    def test_wrong_length(self):
        """Test a schedule must have one vector per arrival."""
        with pytest.raises(ScheduleError):
            check_schedule(self._two(), [[0, 0]])
        with pytest.raises(ScheduleError):
            evaluate_schedule(self._two(), [[0, 0]])

    def test_must_start_empty(self):
        """Test the first vector is all zeros."""
        with pytest.raises(ScheduleError):
            check_schedule(self._two(), [[1, 0], [1, 0], [1, 0]])

    def test_growth_without_arrival(self):
        """Test a conversation only grows when it arrives."""
        with pytest.raises(ScheduleError) as exc_info:
            check_schedule(self._two(), [[0, 0], [0, 0], [1, 0]])
        assert exc_info.value.step == 2

    def test_over_capacity(self):
        """Test no vector exceeds the capacity."""
        instance = _instance(1, 0, [(0, 2, 0), (1, 1, 0)])
        with pytest.raises(ScheduleError):
            check_schedule(instance, [[0], [2]])

    def test_feasible(self):
        """Test a feasible schedule passes and is scored."""
        schedule = [[0, 0], [2, 0], [2, 2]]
        check_schedule(self._two(), schedule)
        assert evaluate_schedule(self._two(), schedule) == 2 + 2 + 1


class TestReduction:
    """Tests for budget capping and the hit-maximisation identity."""

    def test_budget_cap_on_random_instances(self):
        """Test clamping an optimal schedule to budgets keeps it feasible and optimal."""
        for instance in _random_instances(150, seed=3):
            solution = solve_hindsight_tel(instance)
            assert verify_budget_cap(solution, instance)

    def test_hit_equivalence(self):
        """Test TEL equals the constant minus cached blocks at arrivals."""
        for instance in _random_instances(150, seed=4):
            solution = solve_hindsight_tel(instance)
            clamped = clamp_to_budgets(instance, solution.schedule)
            hits = hit_equivalence_value(instance, clamped)
            assert tel_constant(instance) - hits == solution.tel_blocks

    def test_over_budget_schedule_rejected(self):
        """Test the hit form refuses schedules caching above a budget."""
        instance = _instance(10, 3, [(0, 2, 2), (1, 1, 0)])
        assert instance.budget(instance.arrivals()[1]) == 2
        with pytest.raises(ScheduleError):
            hit_equivalence_value(instance, [[0], [4]])

    def test_clamp(self):
        """Test blocks above the next arrival's budget are removed."""
        instance = _instance(10, 3, [(0, 2, 2), (1, 1, 0)])
        assert clamp_to_budgets(instance, [[0], [4]]) == [[0], [2]]


class TestMonotonicity:
    """Tests that the optimum never worsens with more room or a looser threshold."""

    def test_non_increasing_in_capacity(self):
        """Test optimal TEL over capacities 0..8 is non-increasing."""
        for instance in _random_instances(60, seed=6):
            values = [
                solve_hindsight_tel(instance.model_copy(update={"capacity": c})).tel_blocks
                for c in range(9)
            ]
            assert all(a >= b for a, b in zip(values, values[1:], strict=False))

    def test_non_increasing_in_threshold(self):
        """Test optimal TEL over xi 0..6 is non-increasing."""
        for instance in _random_instances(60, seed=7):
            values = [
                solve_hindsight_tel(instance.model_copy(update={"xi_blocks": xi})).tel_blocks
                for xi in range(7)
            ]
            assert all(a >= b for a, b in zip(values, values[1:], strict=False))


class TestOracleIO:
    """Tests for instance and solution files."""

    def test_load_and_save(self, tmp_path):
        """Test an instance file is solved and the solution written back."""
        instance = _instance(10, 0, [(0, 2, 1), (1, 2, 1)])
        path = tmp_path / "instance.json"
        path.write_text(instance.model_dump_json())
        loaded = load_instance(path)
        assert loaded == instance
        out = save_solution(solve_hindsight_tel(loaded), tmp_path / "out" / "solution.json")
        assert json.loads(out.read_text())["tel_blocks"] == 4

    def test_bad_instance(self, tmp_path):
        """Test unreadable instances are configuration errors."""
        path = tmp_path / "instance.json"
        path.write_text(json.dumps({"capacity": -1, "conversations": []}))
        with pytest.raises(ConfigurationError):
            load_instance(path)
        with pytest.raises(ConfigurationError):
            load_instance(tmp_path / "missing.json")
