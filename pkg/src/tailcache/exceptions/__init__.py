"""Exception types for tailcache."""

from tailcache.exceptions.types import (
    TailCacheError,
    ConfigurationError,
    InvalidArgumentError,
    TraceParseError,
    TraceValidationError,
    WorkloadError,
    CapacityInfeasibleError,
    ClairvoyanceError,
    InstanceTooLargeError,
    ScheduleError,
    CellFailureError,
)

__all__ = [
    "TailCacheError",
    "ConfigurationError",
    "InvalidArgumentError",
    "TraceParseError",
    "TraceValidationError",
    "WorkloadError",
    "CapacityInfeasibleError",
    "ClairvoyanceError",
    "InstanceTooLargeError",
    "ScheduleError",
    "CellFailureError",
]
