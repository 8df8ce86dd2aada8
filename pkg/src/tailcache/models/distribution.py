"""Discrete prompt/response length distributions."""

from __future__ import annotations

import bisect
from collections import Counter
from collections.abc import Iterable
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

PROBABILITY_TOLERANCE = 1e-9


class PromptLengthDistribution(BaseModel):
    """Finite-support distribution over block counts.

    Example:
        >>> dist = PromptLengthDistribution.from_values([50, 150], [0.5, 0.5])
        >>> dist.survival(110)
        0.5
    """

    model_config = ConfigDict(frozen=True)

    support: tuple[tuple[int, float], ...] = Field(
        ..., min_length=1, description="(block_count, probability) pairs, ascending"
    )
    provenance: Literal["empirical", "explicit"] = Field(
        default="explicit", description="How the distribution was obtained"
    )

    @model_validator(mode="after")
    def _check_support(self) -> PromptLengthDistribution:
        values = [v for v, _ in self.support]
        if any(v < 0 for v in values):
            raise ValueError("block counts must be non-negative")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("support must be sorted ascending with distinct block counts")
        probs = [p for _, p in self.support]
        if any(p < 0.0 or p > 1.0 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(sum(probs) - 1.0) > PROBABILITY_TOLERANCE:
            raise ValueError(f"probabilities sum to {sum(probs)!r}, expected 1")
        return self

    @classmethod
    def from_values(
        cls,
        values: Iterable[int],
        probs: Iterable[float],
        *,
        provenance: Literal["empirical", "explicit"] = "explicit",
    ) -> PromptLengthDistribution:
        """Build from parallel value/probability lists (any order, merged on duplicates)."""
        merged: dict[int, float] = {}
        for value, prob in zip(values, probs, strict=True):
            merged[int(value)] = merged.get(int(value), 0.0) + float(prob)
        return cls(support=tuple(sorted(merged.items())), provenance=provenance)

    @classmethod
    def degenerate(cls, value: int) -> PromptLengthDistribution:
        """Point mass at `value` (deterministic prompt length)."""
        return cls(support=((value, 1.0),))

    @classmethod
    def uniform(cls, values: Iterable[int]) -> PromptLengthDistribution:
        """Equal mass on each distinct value."""
        distinct = sorted(set(values))
        return cls.from_values(distinct, [1.0 / len(distinct)] * len(distinct))

    @classmethod
    def from_samples(cls, samples: Iterable[int]) -> PromptLengthDistribution:
        """Empirical relative frequencies."""
        counts = Counter(int(s) for s in samples)
        total = sum(counts.values())
        return cls(
            support=tuple((v, c / total) for v, c in sorted(counts.items())),
            provenance="empirical",
        )

    @property
    def values(self) -> list[int]:
        return [v for v, _ in self.support]

    @property
    def probs(self) -> list[float]:
        return [p for _, p in self.support]

    @property
    def is_degenerate(self) -> bool:
        return len(self.support) == 1

    def mean(self) -> float:
        """Expected block count."""
        return sum(v * p for v, p in self.support)

    def survival(self, k: float) -> float:
        """P(Q >= k)."""
        start = bisect.bisect_left(self.values, k)
        return sum(p for _, p in self.support[start:])

    def expected_positive_part(self, offset: float) -> float:
        """E[(offset + Q)^+]."""
        return sum(p * max(offset + v, 0.0) for v, p in self.support)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw block counts with a numpy generator."""
        return rng.choice(np.asarray(self.values, dtype=np.int64), size=size, p=self._normalised())

    def _normalised(self) -> np.ndarray:
        probs = np.asarray(self.probs, dtype=np.float64)
        return probs / probs.sum()
