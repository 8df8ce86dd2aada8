"""Posterior belief that a silent conversation is still alive."""

from __future__ import annotations

import math

from tailcache.exceptions import InvalidArgumentError


def belief_survival(death_rate: float, elapsed: float) -> float:
    """exp(-mu * elapsed): probability a conversation silent for `elapsed` is alive.

    Example:
        >>> belief_survival(2.0, math.log(2))
        0.25
    """
    if elapsed < 0:
        raise InvalidArgumentError("elapsed time must be non-negative", "elapsed", elapsed)
    if death_rate <= 0:
        raise InvalidArgumentError("death rate must be positive", "death_rate", death_rate)
    return math.exp(-death_rate * elapsed)
