"""Policy registry: PolicyConfig -> CachePolicy."""

from __future__ import annotations

from tailcache.exceptions import ConfigurationError
from tailcache.models import PolicyConfig, PolicyFamily
from tailcache.policies.base import CachePolicy
from tailcache.policies.belady import TailBeladyPolicy
from tailcache.policies.etlru import ExpectedTailLruPolicy
from tailcache.policies.lru import LruPolicy, ThresholdLruPolicy
from tailcache.policies.tlru import TailOptimizedLruPolicy

POLICY_CLASSES: dict[PolicyFamily, type[CachePolicy]] = {
    PolicyFamily.LRU: LruPolicy,
    PolicyFamily.THRESHOLD_LRU: ThresholdLruPolicy,
    PolicyFamily.TLRU: TailOptimizedLruPolicy,
    PolicyFamily.END_AWARE_TLRU: TailOptimizedLruPolicy,
    PolicyFamily.LENGTH_AWARE_TLRU: TailOptimizedLruPolicy,
    PolicyFamily.ETLRU: ExpectedTailLruPolicy,
    PolicyFamily.TAIL_BELADY: TailBeladyPolicy,
}


def check_family_parameters(config: PolicyConfig) -> None:
    """Raise ConfigurationError if a family-specific parameter is missing."""
    family = config.family
    if family in (PolicyFamily.TLRU, PolicyFamily.END_AWARE_TLRU) and config.q_hat_blocks is None:
        raise ConfigurationError(
            f"{config.name} needs q_hat_blocks",
            "q_hat_blocks",
            suggestion="Set q_hat_blocks, or replay a trace so it defaults to the mean prompt",
        )
    if family == PolicyFamily.ETLRU:
        if config.death_rate is None:
            raise ConfigurationError(f"{config.name} needs death_rate", "death_rate")
        if config.prompt_dist is None:
            raise ConfigurationError(f"{config.name} needs prompt_dist", "prompt_dist")


def build_policy(config: PolicyConfig) -> CachePolicy:
    """Instantiate the policy for `config` after checking its parameters.

    Example:
        >>> policy = build_policy(PolicyConfig(family=PolicyFamily.LRU))
        >>> policy.name
        'LRU'
    """
    check_family_parameters(config)
    return POLICY_CLASSES[config.family](config)
