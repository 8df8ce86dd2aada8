"""Tests for synthetic workloads and configuration loading."""

import json
import math
from statistics import mean

import pytest

from tailcache.core import validate_trace
from tailcache.exceptions import ConfigurationError, InvalidArgumentError
from tailcache.models import PolicyFamily, PromptLengthDistribution, SyntheticParams
from tailcache.workload import (
    belief_survival,
    conversation_turns,
    death_rate_for_mean_turns,
    generate_synthetic,
    load_policy_config,
    load_run_config,
    load_synthetic_params,
    sharegpt_preset,
    wildchat_like_preset,
    write_trace,
)
from tests.helpers import make_trace


def _small_params(**overrides) -> SyntheticParams:
    values = {
        "conversation_birth_rate": 1.0,
        "turn_rate": 3.0,
        "death_rate": 1.2,
        "prompt_length_dist": PromptLengthDistribution.uniform(range(1, 11)),
        "response_length_dist": PromptLengthDistribution.uniform(range(0, 21)),
        "max_events": 300,
        "seed": 7,
    }
    values.update(overrides)
    return SyntheticParams(**values)


class TestBeliefSurvival:
    """Tests for belief_survival."""

    def test_decay(self):
        """Test the belief halves twice after log(2) at rate 2."""
        assert belief_survival(2.0, math.log(2)) == pytest.approx(0.25)
        assert belief_survival(1.0, 0.0) == 1.0

    def test_bad_arguments(self):
        """Test negative elapsed time and non-positive rates are rejected."""
        with pytest.raises(InvalidArgumentError):
            belief_survival(1.0, -0.5)
        with pytest.raises(InvalidArgumentError):
            belief_survival(0.0, 1.0)


class TestGenerateSynthetic:
    """Tests for generate_synthetic."""

    def test_same_seed_same_trace(self):
        """Test generation is a pure function of the parameters."""
        assert generate_synthetic(_small_params()) == generate_synthetic(_small_params())
        assert generate_synthetic(_small_params()) != generate_synthetic(_small_params(seed=8))

    def test_trace_is_valid_and_full(self):
        """Test the trace is sorted, has max_events turns and flags each final turn."""
        trace = generate_synthetic(_small_params())
        assert trace.horizon == 300
        assert validate_trace(trace).is_valid
        last = {}
        for index, event in enumerate(trace.events):
            last[event.conversation_id] = index
        flagged = {i for i, e in enumerate(trace.events) if e.is_last_turn}
        assert flagged == set(last.values())

    def test_conversation_streams_are_independent(self):
        """Test a conversation's turns depend only on the seed and its birth index."""
        params = _small_params()
        trace = generate_synthetic(params)
        events = [e for e in trace.events if e.conversation_id == 3]
        alone = conversation_turns(params, 3, events[0].timestamp)
        assert [(e.timestamp, e.prompt_blocks, e.response_blocks) for e in events] == [
            (e.timestamp, e.prompt_blocks, e.response_blocks) for e in alone[: len(events)]
        ]

    def test_max_conversations(self):
        """Test the birth cap limits the number of conversations."""
        trace = generate_synthetic(_small_params(max_conversations=2))
        assert set(trace.conversation_ids) <= {0, 1}
        assert trace.horizon <= 300

    def test_block_size_is_carried(self):
        """Test the emitted trace records its block size."""
        assert generate_synthetic(_small_params(block_size=16)).block_size == 16

    def test_mean_turns_per_conversation(self):
        """Test conversations average 1 + turn_rate / death_rate turns."""
        params = _small_params()
        counts = [len(conversation_turns(params, k, 0.0)) for k in range(2000)]
        assert mean(counts) == pytest.approx(params.expected_turns_per_conversation, rel=0.1)

    def test_birth_rate(self):
        """Test the mean gap between conversation births is 1 / lambda_conv."""
        trace = generate_synthetic(_small_params(max_events=5000))
        births: dict[int, float] = {}
        for event in trace.events:
            births.setdefault(event.conversation_id, event.timestamp)
        ordered = [births[cid] for cid in sorted(births)]
        gaps = [b - a for a, b in zip(ordered, ordered[1:])]
        assert 0.9 <= mean(gaps) <= 1.1

    @pytest.mark.slow
    def test_mean_turns_across_seeds(self):
        """Test the preset's 3.5 turns per conversation over many seeds."""
        means = []
        for seed in range(50):
            params = sharegpt_preset(seed=seed)
            means.append(mean(len(conversation_turns(params, k, 0.0)) for k in range(200)))
        assert mean(means) == pytest.approx(3.5, rel=0.1)


class TestPresets:
    """Tests for the ready-made workloads."""

    def test_death_rate_for_mean_turns(self):
        """Test mu = turn_rate / (mean_turns - 1)."""
        assert death_rate_for_mean_turns(3.0, 3.5) == pytest.approx(1.2)

    def test_sharegpt(self):
        """Test the ShareGPT recipe's clocks and prompt mean."""
        params = sharegpt_preset(seed=4)
        assert params.conversation_birth_rate == 1.0
        assert params.turn_rate == 3.0
        assert params.expected_turns_per_conversation == pytest.approx(3.5)
        assert params.prompt_length_dist.mean() == pytest.approx(100.0)
        assert params.max_events == 2000
        assert params.seed == 4

    def test_wildchat_like(self):
        """Test the WildChat-like preset keeps the clocks with longer prompts."""
        params = wildchat_like_preset()
        assert params.turn_rate == 3.0
        assert params.prompt_length_dist.mean() == pytest.approx(200.0)

    def test_custom_prompts(self):
        """Test a caller-supplied prompt distribution replaces the default."""
        dist = PromptLengthDistribution.degenerate(7)
        assert sharegpt_preset(prompt_length_dist=dist).prompt_length_dist == dist


class TestConfigLoading:
    """Tests for JSON configuration files."""

    def _workload(self, **prompt) -> dict:
        return {
            "conversation_birth_rate": 1.0,
            "turn_rate": 2.0,
            "death_rate": 1.0,
            "prompt_length_dist": prompt or {"values": [5, 10], "probs": [0.25, 0.75]},
            "response_length_dist": {"values": [0], "probs": [1.0]},
            "max_events": 50,
        }

    def test_values_and_probs(self, tmp_path):
        """Test the {values, probs} shorthand."""
        path = tmp_path / "w.json"
        path.write_text(json.dumps(self._workload()))
        params = load_synthetic_params(path)
        assert params.prompt_length_dist.support == ((5, 0.25), (10, 0.75))

    def test_empirical_from_relative_trace(self, tmp_path):
        """Test empirical_from fits the distribution from a trace next to the config."""
        write_trace(make_trace((0, 0.0, 4, 0), (1, 1.0, 8, 0)), tmp_path / "t.ndjson")
        path = tmp_path / "w.json"
        path.write_text(json.dumps(self._workload(empirical_from="t.ndjson")))
        dist = load_synthetic_params(path).prompt_length_dist
        assert dist.support == ((4, 0.5), (8, 0.5))
        assert dist.provenance == "empirical"

    def test_invalid_distribution(self, tmp_path):
        """Test probabilities that do not sum to one are a configuration error."""
        path = tmp_path / "w.json"
        path.write_text(json.dumps(self._workload(values=[1, 2], probs=[0.5, 0.7])))
        with pytest.raises(ConfigurationError):
            load_synthetic_params(path)

    def test_not_an_object(self, tmp_path):
        """Test a JSON array is rejected."""
        path = tmp_path / "w.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigurationError):
            load_synthetic_params(path)

    def test_missing_file(self, tmp_path):
        """Test a missing config file is a configuration error."""
        with pytest.raises(ConfigurationError):
            load_run_config(tmp_path / "absent.json")

    def test_run_config_resolves_paths(self, tmp_path):
        """Test relative trace and output paths resolve against the config's directory."""
        path = tmp_path / "run.json"
        path.write_text(
            json.dumps(
                {
                    "trace_path": "trace.ndjson",
                    "output_dir": "out",
                    "policies": [
                        {"family": "LRU"},
                        {
                            "family": "ETLRU",
                            "death_rate": 1.2,
                            "prompt_dist": {"values": [3], "probs": [1.0]},
                        },
                    ],
                    "capacities": [10, 20],
                    "xi_ms": [0.0],
                }
            )
        )
        config = load_run_config(path)
        assert config.trace_path == tmp_path / "trace.ndjson"
        assert config.output_dir == tmp_path / "out"
        assert config.policies[1].prompt_dist == PromptLengthDistribution.degenerate(3)

    def test_run_config_invalid(self, tmp_path):
        """Test schema errors surface as configuration errors."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"policies": [], "capacities": [1], "xi_ms": [0.0]}))
        with pytest.raises(ConfigurationError):
            load_run_config(path)

    def test_policy_config(self, tmp_path):
        """Test a single policy file."""
        path = tmp_path / "policy.json"
        path.write_text(json.dumps({"family": "TLRU", "xi_blocks": 150, "q_hat_blocks": 100}))
        config = load_policy_config(path)
        assert config.family == PolicyFamily.TLRU
        assert config.q_hat_blocks == 100
