"""Exception type definitions."""

from typing import Any


class TailCacheError(Exception):
    """Base exception for all tailcache errors."""

    def __init__(
        self,
        message: str,
        *,
        error_code: str = "TAILCACHE_ERROR",
        suggestion: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        self.message = message
        self.error_code = error_code
        self.suggestion = suggestion
        self.details = details or {}
        super().__init__(message)

    def __str__(self) -> str:
        parts = [f"[{self.error_code}] {self.message}"]
        if self.suggestion:
            parts.append(f"Suggestion: {self.suggestion}")
        return " | ".join(parts)


class ConfigurationError(TailCacheError):
    """Invalid or missing configuration."""

    def __init__(
        self,
        message: str,
        config_key: str,
        *,
        suggestion: str | None = None,
    ) -> None:
        super().__init__(
            message,
            error_code="CONFIGURATION_ERROR",
            suggestion=suggestion or f"Check the '{config_key}' configuration",
            details={"config_key": config_key},
        )
        self.config_key = config_key


class InvalidArgumentError(TailCacheError):
    """A function argument is outside its domain."""

    def __init__(self, message: str, argument: str, value: Any = None) -> None:
        super().__init__(
            message,
            error_code="INVALID_ARGUMENT",
            details={"argument": argument, "value": value},
        )
        self.argument = argument
        self.value = value


class TraceParseError(TailCacheError):
    """A trace file record could not be parsed."""

    def __init__(
        self,
        message: str,
        line_number: int,
        *,
        source: str | None = None,
    ) -> None:
        super().__init__(
            f"Line {line_number}: {message}",
            error_code="TRACE_PARSE_ERROR",
            suggestion="Each line must be a JSON object with conversation_id, timestamp, "
            "prompt_tokens, response_tokens and is_last_turn",
            details={"line_number": line_number, "source": source},
        )
        self.line_number = line_number
        self.source = source


class TraceValidationError(TailCacheError):
    """A trace violates its ordering or size invariants."""

    def __init__(self, report: Any) -> None:
        count = len(report.violations)
        super().__init__(
            f"Trace rejected with {count} violation(s)",
            error_code="TRACE_VALIDATION_ERROR",
            suggestion="Run validate_trace() to list offending event indices",
            details={"violations": [v.model_dump() for v in report.violations]},
        )
        self.report = report


class WorkloadError(TailCacheError):
    """Workload synthesis or fitting failed."""

    def __init__(self, message: str, *, suggestion: str | None = None) -> None:
        super().__init__(message, error_code="WORKLOAD_ERROR", suggestion=suggestion)


class CapacityInfeasibleError(TailCacheError):
    """Forced caching needs more blocks than the cache holds."""

    def __init__(
        self,
        conversation_id: int,
        required_blocks: int,
        capacity: int,
        *,
        event_index: int | None = None,
    ) -> None:
        where = f" at event {event_index}" if event_index is not None else ""
        super().__init__(
            f"Conversation {conversation_id} needs {required_blocks} blocks under forced "
            f"caching but capacity is {capacity}{where}",
            error_code="CAPACITY_INFEASIBLE",
            suggestion="Raise the capacity or switch to optional caching",
            details={
                "conversation_id": conversation_id,
                "required_blocks": required_blocks,
                "capacity": capacity,
                "event_index": event_index,
            },
        )
        self.conversation_id = conversation_id
        self.required_blocks = required_blocks
        self.capacity = capacity
        self.event_index = event_index

    def at_event(self, event_index: int) -> "CapacityInfeasibleError":
        """Copy of this error tagged with the offending event index."""
        return CapacityInfeasibleError(
            self.conversation_id,
            self.required_blocks,
            self.capacity,
            event_index=event_index,
        )


class ClairvoyanceError(TailCacheError):
    """A clairvoyant policy is missing lookahead data."""

    def __init__(self, message: str, *, conversation_id: int | None = None) -> None:
        super().__init__(
            message,
            error_code="CLAIRVOYANCE_ERROR",
            suggestion="Clairvoyant policies only run inside a trace replay",
            details={"conversation_id": conversation_id},
        )
        self.conversation_id = conversation_id


class InstanceTooLargeError(TailCacheError):
    """Oracle instance exceeds the exhaustive-search limits."""

    def __init__(self, field: str, value: int, limit: int) -> None:
        super().__init__(
            f"Instance {field}={value} exceeds the limit {limit}",
            error_code="INSTANCE_TOO_LARGE",
            suggestion="The hindsight oracle only certifies micro-instances",
            details={"field": field, "value": value, "limit": limit},
        )
        self.field = field
        self.value = value
        self.limit = limit


class ScheduleError(TailCacheError):
    """A cache schedule is infeasible or violates its budget caps."""

    def __init__(self, message: str, *, step: int | None = None) -> None:
        super().__init__(message, error_code="SCHEDULE_ERROR", details={"step": step})
        self.step = step


class CellFailureError(TailCacheError):
    """One (policy, capacity, threshold) cell of a comparison failed."""

    def __init__(
        self,
        policy: str,
        capacity: int,
        xi_ms: float,
        *,
        original_error: Exception | None = None,
    ) -> None:
        super().__init__(
            f"Cell (policy={policy}, capacity={capacity}, xi_ms={xi_ms}) failed: {original_error}",
            error_code="CELL_FAILURE",
            details={"policy": policy, "capacity": capacity, "xi_ms": xi_ms},
        )
        self.policy = policy
        self.capacity = capacity
        self.xi_ms = xi_ms
        self.original_error = original_error
