"""Online and clairvoyant eviction policies."""

from tailcache.policies.base import CachePolicy, EvictionContext
from tailcache.policies.lru import LruPolicy, ThresholdLruPolicy, lru_evict, recency_key
from tailcache.policies.tlru import (
    TailOptimizedLruPolicy,
    next_prompt_estimates,
    tel_safe_budget,
    tlru_trim,
    variant_adjust,
)
from tailcache.policies.etlru import (
    ExpectedTailLruPolicy,
    belief_rate,
    block_score,
    etlru_evict,
    etlru_objective,
    etlru_rank,
)
from tailcache.policies.belady import TailBeladyPolicy, belady_evict
from tailcache.policies.registry import POLICY_CLASSES, build_policy, check_family_parameters

__all__ = [
    "CachePolicy",
    "EvictionContext",
    "LruPolicy",
    "ThresholdLruPolicy",
    "lru_evict",
    "recency_key",
    "TailOptimizedLruPolicy",
    "next_prompt_estimates",
    "tel_safe_budget",
    "tlru_trim",
    "variant_adjust",
    "ExpectedTailLruPolicy",
    "belief_rate",
    "block_score",
    "etlru_evict",
    "etlru_objective",
    "etlru_rank",
    "TailBeladyPolicy",
    "belady_evict",
    "POLICY_CLASSES",
    "build_policy",
    "check_family_parameters",
]
