"""Paired Monte-Carlo comparison of online policies on the synthetic model."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np

from tailcache.exceptions import ConfigurationError
from tailcache.models import (
    MonteCarloReport,
    PairedComparison,
    PolicyConfig,
    PolicyFamily,
    PolicyTelStats,
    SyntheticParams,
)
from tailcache.sim.replay import excess_blocks, replay
from tailcache.workload import generate_synthetic

logger = logging.getLogger(__name__)

Z_95 = 1.96


def policy_for_model(
    family: PolicyFamily,
    params: SyntheticParams,
    xi_blocks: int,
    **overrides: object,
) -> PolicyConfig:
    """PolicyConfig whose model parameters (mu, lambda-bar, Q) come from `params`.

    T-LRU variants get Q-hat = the prompt distribution mean, rounded half up.
    """
    values: dict[str, object] = {"family": family, "xi_blocks": xi_blocks}
    if family == PolicyFamily.ETLRU:
        values.update(
            death_rate=params.death_rate,
            nominal_turn_rate=params.turn_rate,
            nominal_turn_rates=dict(params.turn_rate_overrides),
            prompt_dist=params.prompt_length_dist,
        )
    if family.is_tlru_variant:
        values["q_hat_blocks"] = math.floor(params.prompt_length_dist.mean() + 0.5)
    values.update(overrides)
    return PolicyConfig.model_validate(values)


def _stderr(samples: np.ndarray) -> float:
    if samples.size < 2:
        return 0.0
    return float(np.std(samples, ddof=1) / np.sqrt(samples.size))


def paired_comparison(reference: str, comparator: str, diff: np.ndarray) -> PairedComparison:
    """Normal 95% interval of per-seed differences reference - comparator.

    Holds only when the whole interval is at or below zero.
    """
    mean = float(diff.mean())
    se = _stderr(diff)
    low, high = mean - Z_95 * se, mean + Z_95 * se
    return PairedComparison(
        reference=reference,
        comparator=comparator,
        mean_difference=mean,
        stderr=se,
        ci_low=low,
        ci_high=high,
        holds=high <= 0.0,
    )


def monte_carlo_policy_test(
    params: SyntheticParams,
    policies: Sequence[PolicyConfig],
    capacity: int,
    xi_blocks: int,
    runs: int,
    *,
    reference: str | None = None,
) -> MonteCarloReport:
    """Mean TEL per policy over `runs` seeds, with paired differences against `reference`.

    Run r uses seed params.seed + r and every policy replays the same trace,
    so differences are paired. A comparison holds when the 95% interval of
    (reference - comparator) lies entirely at or below zero.

    Example:
        >>> report = monte_carlo_policy_test(params, [etlru, lru], capacity=400,
        ...                                  xi_blocks=150, runs=1000, reference="ETLRU")
        >>> report.all_hold
        True
    """
    if runs < 1:
        raise ConfigurationError("Monte-Carlo needs at least one run", "runs")
    names = [p.name for p in policies]
    if len(set(names)) != len(names):
        raise ConfigurationError(f"policy labels must be unique, got {names}", "policies")
    reference = reference or names[0]
    if reference not in names:
        raise ConfigurationError(f"reference {reference!r} is not one of {names}", "reference")

    configured = [p.model_copy(update={"xi_blocks": xi_blocks}) for p in policies]
    tel = np.zeros((len(configured), runs), dtype=np.float64)
    for run in range(runs):
        trace = generate_synthetic(params.model_copy(update={"seed": params.seed + run}))
        for row, config in enumerate(configured):
            result = replay(trace, config, capacity)
            tel[row, run] = excess_blocks(result.records, xi_blocks)
        if (run + 1) % 100 == 0:
            logger.info(f"Monte-Carlo: {run + 1}/{runs} runs")

    stats = [
        PolicyTelStats(
            policy=name, mean_tel_blocks=float(tel[row].mean()), stderr=_stderr(tel[row])
        )
        for row, name in enumerate(names)
    ]

    ref_row = names.index(reference)
    comparisons: list[PairedComparison] = []
    for row, name in enumerate(names):
        if row == ref_row:
            continue
        comparison = paired_comparison(reference, name, tel[ref_row] - tel[row])
        comparisons.append(comparison)
        logger.info(
            f"{reference} - {name}: {comparison.mean_difference:+.3f} "
            f"+/- {Z_95 * comparison.stderr:.3f} blocks"
        )

    return MonteCarloReport(
        runs=runs,
        reference=reference,
        capacity=capacity,
        xi_blocks=xi_blocks,
        policies=stats,
        comparisons=comparisons,
    )
