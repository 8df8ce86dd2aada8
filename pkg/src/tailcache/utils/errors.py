"""User-friendly error messages for the command line."""

from tailcache.exceptions import (
    CapacityInfeasibleError,
    CellFailureError,
    ClairvoyanceError,
    ConfigurationError,
    InstanceTooLargeError,
    TailCacheError,
    TraceParseError,
    TraceValidationError,
)


def friendly_error(e: str | Exception) -> str:
    """Convert an exception or error string to a one-line message."""
    if isinstance(e, CellFailureError) and e.original_error is not None:
        cause = friendly_error(e.original_error)
        return f"{e.policy} at C={e.capacity}, xi={e.xi_ms:g} ms: {cause}"

    if isinstance(e, TraceParseError):
        where = f"{e.source}, " if e.source else ""
        return f"Malformed trace ({where}{e.message.lower()})"

    if isinstance(e, TraceValidationError) and e.report.violations:
        first = e.report.violations[0]
        return f"{e.message}; first at event {first.event_index}: {first.kind.value}"

    if isinstance(e, CapacityInfeasibleError):
        return (
            f"{e.message}. Forced caching cannot hold this history; "
            "raise the capacity or use optional caching."
        )

    if isinstance(e, ClairvoyanceError):
        return f"{e.message}. Clairvoyant policies only run inside a trace replay."

    if isinstance(e, InstanceTooLargeError):
        return f"{e.message}; the exhaustive oracle only takes micro-instances."

    if isinstance(e, ConfigurationError):
        return f"Configuration error: {e.message}"

    if isinstance(e, TailCacheError):
        return e.message if not e.suggestion else f"{e.message} ({e.suggestion})"

    if isinstance(e, FileNotFoundError):
        return f"File not found: {e.filename}"

    return str(e)
