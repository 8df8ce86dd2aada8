"""Synthetic workload parameters for the birth-death conversation model."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tailcache.models.distribution import PromptLengthDistribution


class SyntheticParams(BaseModel):
    """Parameters of the stochastic conversation model.

    Conversations are born at `conversation_birth_rate`, live an exponential
    time with rate `death_rate`, and emit turns at `turn_rate` while alive.

    Example:
        >>> params = SyntheticParams(
        ...     conversation_birth_rate=1.0,
        ...     turn_rate=3.0,
        ...     death_rate=1.2,
        ...     prompt_length_dist=PromptLengthDistribution.degenerate(100),
        ...     response_length_dist=PromptLengthDistribution.degenerate(50),
        ...     max_events=2000,
        ...     seed=7,
        ... )
        >>> params.expected_turns_per_conversation
        3.5
    """

    model_config = ConfigDict(frozen=True)

    conversation_birth_rate: float = Field(..., gt=0.0, description="lambda_conv (births/s)")
    turn_rate: float = Field(..., gt=0.0, description="Homogeneous per-conversation turn rate")
    turn_rate_overrides: dict[int, float] = Field(
        default_factory=dict, description="Per-conversation turn rate by birth index"
    )
    death_rate: float = Field(..., gt=0.0, description="mu, conversation death rate per second")
    prompt_length_dist: PromptLengthDistribution = Field(..., description="Prompt length Q")
    response_length_dist: PromptLengthDistribution = Field(
        ..., description="Response length A (blocks); never read by policies"
    )
    max_events: int = Field(..., ge=1, description="Stop after this many turns")
    max_conversations: int | None = Field(
        default=None, ge=1, description="Optional cap on the number of conversations born"
    )
    seed: int = Field(default=0, ge=0, lt=2**64, description="Root seed")
    block_size: int = Field(default=1, ge=1, description="Tokens per block of the emitted trace")

    @model_validator(mode="after")
    def _check_rates(self) -> SyntheticParams:
        if min(self.prompt_length_dist.values) < 1:
            raise ValueError("prompt_length_dist support must be >= 1 block")
        for conversation_id, rate in self.turn_rate_overrides.items():
            if rate <= 0.0:
                raise ValueError(f"turn rate override for {conversation_id} must be positive")
        return self

    def turn_rate_for(self, conversation_id: int) -> float:
        """Turn rate of one conversation."""
        return self.turn_rate_overrides.get(conversation_id, self.turn_rate)

    @property
    def expected_turns_per_conversation(self) -> float:
        """Mean turns per conversation: first turn at birth plus turn_rate/death_rate more."""
        return self.turn_rate / self.death_rate + 1.0
