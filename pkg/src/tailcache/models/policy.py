"""Policy configuration and eviction decision models."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tailcache.models.distribution import PromptLengthDistribution

DEFAULT_CACHE_THRESHOLD_BLOCKS = 1024


class PolicyFamily(str, Enum):
    """Supported eviction policy families."""

    LRU = "LRU"
    THRESHOLD_LRU = "THRESHOLD_LRU"
    TLRU = "TLRU"
    ETLRU = "ETLRU"
    END_AWARE_TLRU = "END_AWARE_TLRU"
    LENGTH_AWARE_TLRU = "LENGTH_AWARE_TLRU"
    TAIL_BELADY = "TAIL_BELADY"

    @property
    def is_tlru_variant(self) -> bool:
        return self in (
            PolicyFamily.TLRU,
            PolicyFamily.END_AWARE_TLRU,
            PolicyFamily.LENGTH_AWARE_TLRU,
        )


class CachingMode(str, Enum):
    """Whether a served turn may be partially cached."""

    OPTIONAL = "optional"
    FORCED = "forced"


class PolicyConfig(BaseModel):
    """Selection of a policy family and its parameters.

    Parameters a family does not use are ignored.

    Example:
        >>> PolicyConfig(family=PolicyFamily.TLRU, xi_blocks=150, q_hat_blocks=100)
    """

    model_config = ConfigDict(frozen=True)

    family: PolicyFamily = Field(..., description="Policy family")
    label: str | None = Field(default=None, description="Display name; defaults to the family")
    xi_blocks: int = Field(default=0, ge=0, description="TEL threshold xi = xi_s / alpha (blocks)")
    q_hat_blocks: int | None = Field(
        default=None,
        ge=0,
        description="Next-prompt estimate for T-LRU variants; None = trace mean prompt",
    )
    cache_threshold_blocks: int = Field(
        default=DEFAULT_CACHE_THRESHOLD_BLOCKS, ge=0, description="Threshold-LRU admission length"
    )
    death_rate: float | None = Field(default=None, gt=0.0, description="mu (ET-LRU)")
    nominal_turn_rate: float = Field(default=1.0, gt=0.0, description="Homogeneous lambda-bar")
    nominal_turn_rates: dict[int, float] = Field(
        default_factory=dict, description="Per-conversation lambda-bar overrides (ET-LRU)"
    )
    prompt_dist: PromptLengthDistribution | None = Field(
        default=None, description="Next-prompt distribution (ET-LRU)"
    )
    caching_mode: CachingMode = Field(default=CachingMode.OPTIONAL, description="Caching mode")

    @model_validator(mode="after")
    def _check_rates(self) -> PolicyConfig:
        for conversation_id, rate in self.nominal_turn_rates.items():
            if rate <= 0.0:
                raise ValueError(f"nominal turn rate for {conversation_id} must be positive")
        return self

    @property
    def name(self) -> str:
        return self.label or self.family.value

    def turn_rate_for(self, conversation_id: int) -> float:
        """Nominal turn rate lambda-bar of one conversation."""
        return self.nominal_turn_rates.get(conversation_id, self.nominal_turn_rate)


class EvictionPhase(str, Enum):
    """Why a block was evicted."""

    TEL_SAFE_TRIM = "TEL_SAFE_TRIM"
    LRU_FALLBACK = "LRU_FALLBACK"
    BELADY = "BELADY"
    RANKED = "RANKED"
    TERMINATED = "TERMINATED"
    BELOW_THRESHOLD = "BELOW_THRESHOLD"


class Eviction(BaseModel):
    """Blocks removed from one conversation in one step."""

    model_config = ConfigDict(frozen=True)

    conversation_id: int = Field(..., ge=0)
    blocks: int = Field(..., ge=1)
    phase: EvictionPhase


class EvictionDecision(BaseModel):
    """Ordered evictions produced for one overflow."""

    evictions: list[Eviction] = Field(default_factory=list)

    def add(self, conversation_id: int, blocks: int, phase: EvictionPhase) -> None:
        """Append, merging with the previous run of the same conversation and phase."""
        if blocks <= 0:
            return
        if self.evictions:
            last = self.evictions[-1]
            if last.conversation_id == conversation_id and last.phase == phase:
                self.evictions[-1] = Eviction(
                    conversation_id=conversation_id, blocks=last.blocks + blocks, phase=phase
                )
                return
        self.evictions.append(Eviction(conversation_id=conversation_id, blocks=blocks, phase=phase))

    def extend(self, other: EvictionDecision) -> None:
        for eviction in other.evictions:
            self.add(eviction.conversation_id, eviction.blocks, eviction.phase)

    @property
    def total_blocks(self) -> int:
        return sum(e.blocks for e in self.evictions)

    @property
    def phase_tags(self) -> list[EvictionPhase]:
        return [e.phase for e in self.evictions]

    def sequence(self) -> list[tuple[int, int]]:
        """(conversation_id, blocks) runs with phase tags dropped and adjacent runs merged."""
        runs: list[tuple[int, int]] = []
        for eviction in self.evictions:
            if runs and runs[-1][0] == eviction.conversation_id:
                runs[-1] = (eviction.conversation_id, runs[-1][1] + eviction.blocks)
            else:
                runs.append((eviction.conversation_id, eviction.blocks))
        return runs

    def by_conversation(self) -> dict[int, int]:
        """Total blocks evicted per conversation."""
        totals: dict[int, int] = {}
        for eviction in self.evictions:
            cid = eviction.conversation_id
            totals[cid] = totals.get(cid, 0) + eviction.blocks
        return totals
