"""Tests for the paired Monte-Carlo harness."""

import numpy as np
import pytest

from tailcache.exceptions import ConfigurationError
from tailcache.models import PolicyFamily, PromptLengthDistribution, SyntheticParams
from tailcache.sim import monte_carlo_policy_test, paired_comparison, policy_for_model


def _params(**overrides) -> SyntheticParams:
    """Small-block workload with a two-point prompt length."""
    values = {
        "conversation_birth_rate": 1.0,
        "turn_rate": 3.0,
        "death_rate": 1.2,
        "prompt_length_dist": PromptLengthDistribution.from_values([1, 6], [0.5, 0.5]),
        "response_length_dist": PromptLengthDistribution.uniform(range(0, 4)),
        "max_events": 150,
        "seed": 100,
    }
    values.update(overrides)
    return SyntheticParams(**values)


class TestPolicyForModel:
    """Tests for policy_for_model."""

    def test_etlru_takes_model_parameters(self):
        """Test ET-LRU gets mu, lambda-bar and Q from the workload."""
        params = _params()
        config = policy_for_model(PolicyFamily.ETLRU, params, 3)
        assert config.death_rate == params.death_rate
        assert config.nominal_turn_rate == params.turn_rate
        assert config.prompt_dist == params.prompt_length_dist
        assert config.xi_blocks == 3

    def test_tlru_takes_mean_prompt(self):
        """Test T-LRU variants get Q-hat from the prompt mean."""
        config = policy_for_model(PolicyFamily.TLRU, _params(), 2)
        assert config.q_hat_blocks == 4

    def test_overrides(self):
        """Test keyword overrides win."""
        config = policy_for_model(
            PolicyFamily.THRESHOLD_LRU, _params(), 0, cache_threshold_blocks=5, label="T5"
        )
        assert config.cache_threshold_blocks == 5
        assert config.name == "T5"


class TestMonteCarlo:
    """Tests for monte_carlo_policy_test."""

    def test_self_difference_is_zero(self):
        """Test a policy against an identical copy differs by exactly nothing."""
        params = _params()
        lru = policy_for_model(PolicyFamily.LRU, params, 2)
        copy = lru.model_copy(update={"label": "LRU copy"})
        report = monte_carlo_policy_test(params, [lru, copy], capacity=15, xi_blocks=2, runs=5)
        comparison = report.comparisons[0]
        assert comparison.mean_difference == 0.0
        assert comparison.stderr == 0.0
        assert comparison.holds
        assert report.reference == "LRU"

    def test_huge_threshold_has_no_excess(self):
        """Test TEL vanishes when xi exceeds every job."""
        params = _params()
        policies = [policy_for_model(f, params, 0) for f in (PolicyFamily.LRU, PolicyFamily.ETLRU)]
        report = monte_carlo_policy_test(params, policies, capacity=10, xi_blocks=10**6, runs=3)
        assert all(s.mean_tel_blocks == 0.0 for s in report.policies)
        assert report.all_hold

    def test_seeds_are_paired(self):
        """Test repeating the experiment reproduces every statistic."""
        params = _params()
        policies = [policy_for_model(PolicyFamily.LRU, params, 1)]
        first = monte_carlo_policy_test(params, policies, capacity=12, xi_blocks=1, runs=4)
        second = monte_carlo_policy_test(params, policies, capacity=12, xi_blocks=1, runs=4)
        assert first == second
        assert first.comparisons == []

    def test_bad_arguments(self):
        """Test run counts, duplicate labels and unknown references are rejected."""
        params = _params()
        lru = policy_for_model(PolicyFamily.LRU, params, 0)
        with pytest.raises(ConfigurationError):
            monte_carlo_policy_test(params, [lru], capacity=10, xi_blocks=0, runs=0)
        with pytest.raises(ConfigurationError):
            monte_carlo_policy_test(params, [lru, lru], capacity=10, xi_blocks=0, runs=1)
        with pytest.raises(ConfigurationError):
            monte_carlo_policy_test(
                params, [lru], capacity=10, xi_blocks=0, runs=1, reference="ETLRU"
            )

    @pytest.mark.slow
    def test_etlru_not_worse_than_lru_baselines(self):
        """Test ET-LRU's mean TEL is below LRU and Threshold-LRU with 95% confidence."""
        params = _params(max_events=300)
        xi = 3
        policies = [
            policy_for_model(PolicyFamily.ETLRU, params, xi),
            policy_for_model(PolicyFamily.LRU, params, xi),
            policy_for_model(PolicyFamily.THRESHOLD_LRU, params, xi, cache_threshold_blocks=8),
        ]
        report = monte_carlo_policy_test(
            params, policies, capacity=20, xi_blocks=xi, runs=1000, reference="ETLRU"
        )
        assert [c.comparator for c in report.comparisons] == ["LRU", "THRESHOLD_LRU"]
        assert report.all_hold

    @pytest.mark.slow
    def test_tlru_not_worse_with_deterministic_prompts(self):
        """Test T-LRU with exact Q-hat beats LRU and Threshold-LRU on mean TEL."""
        params = _params(
            prompt_length_dist=PromptLengthDistribution.from_values([4], [1.0]), max_events=300
        )
        xi = 6
        policies = [
            policy_for_model(PolicyFamily.TLRU, params, xi),
            policy_for_model(PolicyFamily.LRU, params, xi),
            policy_for_model(PolicyFamily.THRESHOLD_LRU, params, xi, cache_threshold_blocks=8),
        ]
        assert policies[0].q_hat_blocks == 4
        report = monte_carlo_policy_test(
            params, policies, capacity=12, xi_blocks=xi, runs=1000, reference="TLRU"
        )
        assert all(c.mean_difference <= 0.0 for c in report.comparisons)
        assert report.all_hold


class TestPairedComparison:
    """Tests for the paired confidence rule."""

    def test_marginally_worse_reference_fails(self):
        """Test a positive mean difference fails even when the interval reaches below zero."""
        comparison = paired_comparison("ETLRU", "LRU", np.array([1.0, 0.0, 1.0, 0.0]))
        assert comparison.mean_difference == 0.5
        assert comparison.ci_low < 0.0 < comparison.ci_high
        assert not comparison.holds

    def test_clearly_better_reference_holds(self):
        """Test an interval entirely below zero holds."""
        comparison = paired_comparison("ETLRU", "LRU", np.array([-2.0, -1.0, -2.0, -1.0]))
        assert comparison.ci_high < 0.0
        assert comparison.holds

    def test_identical_policies_hold(self):
        """Test a zero difference with zero spread holds."""
        comparison = paired_comparison("LRU", "LRU copy", np.zeros(5))
        assert comparison.ci_low == comparison.ci_high == 0.0
        assert comparison.holds

    def test_better_on_average_but_uncertain_fails(self):
        """Test a negative mean whose interval crosses zero does not hold."""
        comparison = paired_comparison("ETLRU", "LRU", np.array([-3.0, 2.0, -3.0, 2.0]))
        assert comparison.mean_difference < 0.0
        assert not comparison.holds
