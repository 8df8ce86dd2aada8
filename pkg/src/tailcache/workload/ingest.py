"""Canonical NDJSON trace files: loading, writing and prompt-length fitting."""

from __future__ import annotations

import json
import logging
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from tailcache.core.trace import tokens_to_blocks, validate_trace
from tailcache.exceptions import TraceParseError, TraceValidationError, WorkloadError
from tailcache.models import PromptLengthDistribution, Trace, TurnEvent

logger = logging.getLogger(__name__)


class TraceRecord(BaseModel):
    """One line of a trace file, before block conversion and re-indexing."""

    conversation_id: int | str = Field(..., description="Any stable id; re-indexed on load")
    timestamp: float = Field(..., ge=0.0, description="Seconds")
    prompt_tokens: int = Field(..., ge=0)
    response_tokens: int = Field(default=0, ge=0)
    is_last_turn: bool | None = Field(default=None)


def _parse_lines(path: Path) -> list[TraceRecord]:
    records: list[TraceRecord] = []
    with path.open() as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                records.append(TraceRecord.model_validate(json.loads(line)))
            except json.JSONDecodeError as e:
                raise TraceParseError(
                    f"invalid JSON ({e.msg})", line_number, source=str(path)
                ) from e
            except ValidationError as e:
                first = e.errors()[0]
                field = ".".join(str(part) for part in first["loc"]) or "record"
                raise TraceParseError(
                    f"{field}: {first['msg']}", line_number, source=str(path)
                ) from e
    return records


def load_conversations(
    source: Path | str,
    block_size: int = 1,
    *,
    max_turns: int | None = None,
) -> Trace:
    """Load a canonical trace file.

    Conversations are re-indexed 0, 1, ... in order of first arrival; the
    optional turn cap keeps the earliest `max_turns` events.

    Args:
        source: Newline-delimited JSON, one turn per line
        block_size: Tokens per block
        max_turns: Keep only the first turns by timestamp

    Returns:
        A validated trace

    Raises:
        TraceParseError: On a malformed line (with its line number)
        TraceValidationError: If the loaded trace breaks an ordering or size rule

    Example:
        >>> trace = load_conversations("wildchat.ndjson", block_size=1, max_turns=2000)
        >>> trace.horizon
        2000
    """
    path = Path(source)
    records = _parse_lines(path)

    order = sorted(range(len(records)), key=lambda i: (records[i].timestamp, i))
    dense: dict[int | str, int] = {}
    for i in order:
        dense.setdefault(records[i].conversation_id, len(dense))

    events = [
        TurnEvent(
            conversation_id=dense[r.conversation_id],
            timestamp=r.timestamp,
            prompt_blocks=tokens_to_blocks(r.prompt_tokens, block_size),
            response_blocks=tokens_to_blocks(r.response_tokens, block_size),
            is_last_turn=r.is_last_turn,
        )
        for r in records
    ]
    trace = Trace.from_events(events, block_size=block_size)

    if max_turns is not None and trace.horizon > max_turns:
        logger.warning(f"{path.name}: keeping the first {max_turns} of {trace.horizon} turns")
        trace = Trace(events=trace.events[:max_turns], block_size=block_size)

    report = validate_trace(trace)
    if not report.is_valid:
        raise TraceValidationError(report)

    logger.info(
        f"Loaded {trace.horizon} turns of {len(trace.conversation_ids)} conversations from {path}"
    )
    return trace


def write_trace(trace: Trace, destination: Path | str) -> Path:
    """Write `trace` in the canonical format (token fields = blocks x block_size)."""
    path = Path(destination)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as handle:
        for event in trace.events:
            line = {
                "conversation_id": event.conversation_id,
                "timestamp": event.timestamp,
                "prompt_tokens": event.prompt_blocks * trace.block_size,
                "response_tokens": event.response_blocks * trace.block_size,
                "is_last_turn": event.is_last_turn,
            }
            handle.write(json.dumps(line) + "\n")
    logger.info(f"Wrote {trace.horizon} turns to {path}")
    return path


def fit_prompt_distribution(trace: Trace) -> PromptLengthDistribution:
    """Empirical distribution of the trace's prompt block counts.

    Raises:
        WorkloadError: If the trace has no events
    """
    if not trace.events:
        raise WorkloadError(
            "cannot fit a prompt distribution to an empty trace",
            suggestion="Load or generate at least one turn first",
        )
    return PromptLengthDistribution.from_samples(e.prompt_blocks for e in trace.events)
