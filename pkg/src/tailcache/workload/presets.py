"""Ready-made synthetic workloads."""

from __future__ import annotations

from tailcache.models import PromptLengthDistribution, SyntheticParams

SHAREGPT_BIRTH_RATE = 1.0
SHAREGPT_TURN_RATE = 3.0
SHAREGPT_MEAN_TURNS = 3.5


def death_rate_for_mean_turns(turn_rate: float, mean_turns: float) -> float:
    """mu such that a conversation emits `mean_turns` turns on average.

    The first turn comes at birth and turn_rate / mu more follow, so
    mu = turn_rate / (mean_turns - 1).

    Example:
        >>> death_rate_for_mean_turns(3.0, 3.5)
        1.2
    """
    return turn_rate / (mean_turns - 1.0)


def _spread(mean: int) -> PromptLengthDistribution:
    """Uniform over 1 .. 2*mean - 1, whose mean is exactly `mean`."""
    return PromptLengthDistribution.uniform(range(1, 2 * mean))


def sharegpt_preset(
    *,
    seed: int = 0,
    max_events: int = 2000,
    prompt_length_dist: PromptLengthDistribution | None = None,
    response_length_dist: PromptLengthDistribution | None = None,
) -> SyntheticParams:
    """ShareGPT timestamps recipe: lambda_conv=1, lambda_turn=3, 3.5 turns, prompts ~100 blocks.

    mu is not published with the recipe; it is derived from the mean turn
    count (3 / 2.5 = 1.2).
    """
    return SyntheticParams(
        conversation_birth_rate=SHAREGPT_BIRTH_RATE,
        turn_rate=SHAREGPT_TURN_RATE,
        death_rate=death_rate_for_mean_turns(SHAREGPT_TURN_RATE, SHAREGPT_MEAN_TURNS),
        prompt_length_dist=prompt_length_dist or _spread(100),
        response_length_dist=response_length_dist or _spread(200),
        max_events=max_events,
        seed=seed,
    )


def wildchat_like_preset(
    *,
    seed: int = 0,
    max_events: int = 2000,
    prompt_length_dist: PromptLengthDistribution | None = None,
    response_length_dist: PromptLengthDistribution | None = None,
) -> SyntheticParams:
    """Same clocks as the ShareGPT recipe with WildChat-sized prompts (mean 200 blocks)."""
    return sharegpt_preset(
        seed=seed,
        max_events=max_events,
        prompt_length_dist=prompt_length_dist or _spread(200),
        response_length_dist=response_length_dist or _spread(300),
    )
