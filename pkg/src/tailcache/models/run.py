"""Run configuration and result tables for the simulation harness."""

from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tailcache.models.metrics import LatencyModel, MetricsReport
from tailcache.models.oracle import HindsightInstance
from tailcache.models.policy import CachingMode, PolicyConfig
from tailcache.models.workload import SyntheticParams

DEFAULT_SLO_MS = 200.0


class RunConfig(BaseModel):
    """Everything `compare` needs: trace source, policies and sweeps.

    Example:
        >>> config = load_run_config(Path("run.json"))
        >>> config.model_copy(update={"capacities": [1000, 2000]})
    """

    trace_path: Path | None = Field(default=None, description="Canonical NDJSON trace")
    max_turns: int | None = Field(default=None, ge=1, description="Cap applied when loading")
    synthetic: SyntheticParams | None = Field(default=None, description="Generate instead of load")
    policies: list[PolicyConfig] = Field(..., min_length=1)
    baseline: str | None = Field(default=None, description="Baseline policy label")
    capacities: list[int] = Field(..., min_length=1, description="Capacity sweep (blocks)")
    xi_ms: list[float] = Field(..., min_length=1, description="Threshold sweep (ms)")
    latency: LatencyModel = Field(default_factory=LatencyModel)
    slo_ms: list[float] = Field(default_factory=lambda: [DEFAULT_SLO_MS])
    output_dir: Path = Field(default=Path("results"))
    seed: int | None = Field(default=None, ge=0, description="Overrides the synthetic seed")
    charts: bool = Field(default=False, description="Write SVG charts")

    @model_validator(mode="after")
    def _check_sources(self) -> RunConfig:
        if (self.trace_path is None) == (self.synthetic is None):
            raise ValueError("exactly one of trace_path and synthetic must be set")
        if any(c < 0 for c in self.capacities):
            raise ValueError("capacities must be non-negative")
        if any(x < 0 for x in self.xi_ms):
            raise ValueError("xi_ms values must be non-negative")
        if any(s <= 0 for s in self.slo_ms):
            raise ValueError("slo_ms values must be positive")
        names = [p.name for p in self.policies]
        if len(set(names)) != len(names):
            raise ValueError(f"policy labels must be unique, got {names}")
        if self.baseline is not None and self.baseline not in names:
            raise ValueError(f"baseline {self.baseline!r} is not one of {names}")
        return self

    @property
    def baseline_name(self) -> str:
        return self.baseline or self.policies[0].name


class ComparisonCell(BaseModel):
    """Report of one (policy, capacity, xi_s) replay."""

    model_config = ConfigDict(frozen=True)

    policy: str
    capacity: int
    xi_ms: float
    report: MetricsReport


class ImprovementCell(BaseModel):
    """Relative improvement (%) of one policy over the baseline."""

    model_config = ConfigDict(frozen=True)

    policy: str
    capacity: int
    xi_ms: float
    values: dict[str, float] = Field(..., description="Metric name -> improvement in percent")


class ComparisonTable(BaseModel):
    """Grid of reports keyed by (policy, capacity, xi_s) plus baseline improvements."""

    baseline: str
    cells: list[ComparisonCell] = Field(default_factory=list)
    improvements: list[ImprovementCell] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_baseline(self) -> ComparisonTable:
        if self.cells and all(c.policy != self.baseline for c in self.cells):
            raise ValueError(f"baseline {self.baseline!r} missing from the grid")
        return self

    def report(self, policy: str, capacity: int, xi_ms: float) -> MetricsReport | None:
        for cell in self.cells:
            if (cell.policy, cell.capacity, cell.xi_ms) == (policy, capacity, xi_ms):
                return cell.report
        return None

    def improvement(self, policy: str, capacity: int, xi_ms: float) -> dict[str, float] | None:
        for cell in self.improvements:
            if (cell.policy, cell.capacity, cell.xi_ms) == (policy, capacity, xi_ms):
                return cell.values
        return None


class OracleBounds(BaseModel):
    """Size limits of randomly generated oracle micro-instances."""

    model_config = ConfigDict(frozen=True)

    max_conversations: int = Field(default=3, ge=1)
    max_steps: int = Field(default=6, ge=1)
    max_capacity: int = Field(default=8, ge=0)
    max_turn_blocks: int = Field(default=4, ge=0)
    max_xi_blocks: int = Field(default=4, ge=0)


class OracleMismatch(BaseModel):
    """Instance where the clairvoyant replay missed the optimum."""

    instance: HindsightInstance
    policy_tel_blocks: int
    optimal_tel_blocks: int


class OracleCheckReport(BaseModel):
    """Outcome of comparing Tail-Optimized Belady against the exhaustive optimum."""

    requested: int = Field(..., ge=0)
    checked: int = Field(..., ge=0, description="Instances actually solved")
    skipped_infeasible: int = Field(default=0, ge=0, description="Forced-mode instances skipped")
    mode: CachingMode = CachingMode.OPTIONAL
    seed: int = 0
    mismatches: list[OracleMismatch] = Field(default_factory=list)

    @property
    def is_clean(self) -> bool:
        return not self.mismatches


class PolicyTelStats(BaseModel):
    """Mean TEL of one policy across Monte-Carlo runs."""

    policy: str
    mean_tel_blocks: float
    stderr: float


class PairedComparison(BaseModel):
    """Paired difference reference - comparator across seeds (negative favours reference)."""

    reference: str
    comparator: str
    mean_difference: float
    stderr: float
    ci_low: float
    ci_high: float
    holds: bool = Field(..., description="Whole 95% interval at or below zero")


class MonteCarloReport(BaseModel):
    """Paired Monte-Carlo comparison of policies on the synthetic model."""

    runs: int
    reference: str
    capacity: int
    xi_blocks: int
    policies: list[PolicyTelStats] = Field(default_factory=list)
    comparisons: list[PairedComparison] = Field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.comparisons)
