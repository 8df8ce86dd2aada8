"""Latency model, per-request records and aggregated reports."""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field

LATENCY_SOURCE = "modeled-linear-alpha"


class LatencyModel(BaseModel):
    """Linear TTFT model: TTFT = alpha * uncached blocks.

    Example:
        >>> model = LatencyModel(alpha_ms_per_block=1.0)
        >>> model.ttft_ms(200)
        200.0
    """

    model_config = ConfigDict(frozen=True)

    alpha_ms_per_block: float = Field(default=1.0, gt=0.0, description="alpha (ms per block)")
    block_size: int = Field(default=1, ge=1, description="Tokens per block")

    def ttft_ms(self, uncached_blocks: int) -> float:
        return self.alpha_ms_per_block * uncached_blocks

    def xi_blocks(self, xi_ms: float) -> int:
        """Convert a threshold in ms to blocks, rounding half up."""
        return max(math.floor(xi_ms / self.alpha_ms_per_block + 0.5), 0)

    def record(
        self,
        *,
        event_index: int,
        conversation_id: int,
        timestamp: float,
        uncached_blocks: int,
        cached_blocks_used: int,
    ) -> RequestRecord:
        """Build a RequestRecord whose TTFT follows this model."""
        return RequestRecord(
            event_index=event_index,
            conversation_id=conversation_id,
            timestamp=timestamp,
            uncached_blocks=uncached_blocks,
            cached_blocks_used=cached_blocks_used,
            ttft_ms=self.ttft_ms(uncached_blocks),
        )


class RequestRecord(BaseModel):
    """One served request."""

    model_config = ConfigDict(frozen=True)

    event_index: int = Field(..., ge=0, description="Position in the trace")
    conversation_id: int = Field(..., ge=0)
    timestamp: float = Field(..., ge=0.0)
    uncached_blocks: int = Field(..., ge=0, description="b(i), blocks recomputed at prefill")
    cached_blocks_used: int = Field(..., ge=0, description="Blocks reused from the cache")
    ttft_ms: float = Field(..., ge=0.0, description="Modeled TTFT")

    @property
    def job_blocks(self) -> int:
        """History plus prompt: cached and uncached blocks together."""
        return self.uncached_blocks + self.cached_blocks_used


class SloResult(BaseModel):
    """Violations of one SLO threshold."""

    model_config = ConfigDict(frozen=True)

    slo_ms: float = Field(..., gt=0.0)
    count: int = Field(..., ge=0)
    rate: float = Field(..., ge=0.0, le=1.0)


class MetricsReport(BaseModel):
    """Aggregated latency metrics of one replay."""

    model_config = ConfigDict(frozen=True)

    count: int = Field(..., ge=0)
    xi_ms: float = Field(..., ge=0.0, description="Threshold used for TEL")
    tel_ms: float = Field(..., ge=0.0)
    tel_blocks: float = Field(..., ge=0.0, description="TEL / alpha")
    p50: float = 0.0
    p90: float = 0.0
    p95: float = 0.0
    p99: float = 0.0
    mean_ttft_ms: float = 0.0
    max_ttft_ms: float = 0.0
    slo: list[SloResult] = Field(default_factory=list)
    latency_source: str = Field(default=LATENCY_SOURCE, description="TTFT is modeled, not measured")

    def slo_for(self, slo_ms: float) -> SloResult | None:
        for result in self.slo:
            if result.slo_ms == slo_ms:
                return result
        return None
