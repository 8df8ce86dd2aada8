"""Pytest configuration and fixtures."""

import pytest

from tailcache.models import (
    LatencyModel,
    PolicyConfig,
    PolicyFamily,
    PromptLengthDistribution,
    Trace,
)
from tests.helpers import make_trace


@pytest.fixture
def revisit_trace() -> Trace:
    """A at t=0, B at t=1, A again at t=2; 100-block prompts, no responses."""
    return make_trace((0, 0.0, 100, 0), (1, 1.0, 100, 0), (0, 2.0, 100, 0))


@pytest.fixture
def unit_latency() -> LatencyModel:
    """One millisecond per uncached block."""
    return LatencyModel(alpha_ms_per_block=1.0)


@pytest.fixture
def two_point_dist() -> PromptLengthDistribution:
    """Prompts of 50 or 150 blocks with equal probability."""
    return PromptLengthDistribution.from_values([50, 150], [0.5, 0.5])


@pytest.fixture
def tlru_config() -> PolicyConfig:
    """T-LRU with xi = 150 and Q-hat = 100 blocks."""
    return PolicyConfig(family=PolicyFamily.TLRU, xi_blocks=150, q_hat_blocks=100)
