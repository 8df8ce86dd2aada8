"""Latency metrics, KV sizing and alpha calibration."""

from tailcache.metrics.latency import (
    REPORTED_PERCENTILES,
    percentile,
    relative_improvement,
    slo_violations,
    summarize,
    tel,
    ttft,
)
from tailcache.metrics.sizing import (
    GIB,
    VICUNA_7B,
    ModelShape,
    bytes_to_gib,
    capacity_blocks_for_memory,
    kv_bytes_per_token,
    kv_cache_bytes,
)
from tailcache.metrics.calibration import calibrated_model, fit_alpha

__all__ = [
    "REPORTED_PERCENTILES",
    "percentile",
    "relative_improvement",
    "slo_violations",
    "summarize",
    "tel",
    "ttft",
    "GIB",
    "VICUNA_7B",
    "ModelShape",
    "bytes_to_gib",
    "capacity_blocks_for_memory",
    "kv_bytes_per_token",
    "kv_cache_bytes",
    "calibrated_model",
    "fit_alpha",
]
