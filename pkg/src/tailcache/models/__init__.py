"""Pydantic models for tailcache."""

from tailcache.models.trace import (
    TurnEvent,
    Trace,
    ConversationLedger,
    ViolationKind,
    TraceViolation,
    ValidationReport,
)
from tailcache.models.distribution import PromptLengthDistribution
from tailcache.models.workload import SyntheticParams
from tailcache.models.policy import (
    PolicyFamily,
    CachingMode,
    PolicyConfig,
    EvictionPhase,
    Eviction,
    EvictionDecision,
)
from tailcache.models.metrics import LatencyModel, RequestRecord, SloResult, MetricsReport
from tailcache.models.oracle import Arrival, HindsightTurn, HindsightInstance, HindsightSolution
from tailcache.models.run import (
    RunConfig,
    ComparisonCell,
    ImprovementCell,
    ComparisonTable,
    OracleBounds,
    OracleMismatch,
    OracleCheckReport,
    PolicyTelStats,
    PairedComparison,
    MonteCarloReport,
)

__all__ = [
    "TurnEvent",
    "Trace",
    "ConversationLedger",
    "ViolationKind",
    "TraceViolation",
    "ValidationReport",
    "PromptLengthDistribution",
    "SyntheticParams",
    "PolicyFamily",
    "CachingMode",
    "PolicyConfig",
    "EvictionPhase",
    "Eviction",
    "EvictionDecision",
    "LatencyModel",
    "RequestRecord",
    "SloResult",
    "MetricsReport",
    "Arrival",
    "HindsightTurn",
    "HindsightInstance",
    "HindsightSolution",
    "RunConfig",
    "ComparisonCell",
    "ImprovementCell",
    "ComparisonTable",
    "OracleBounds",
    "OracleMismatch",
    "OracleCheckReport",
    "PolicyTelStats",
    "PairedComparison",
    "MonteCarloReport",
]
