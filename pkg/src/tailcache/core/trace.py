"""Block quantization, job sizes, ledgers and trace validation."""

from __future__ import annotations

import math

from tailcache.exceptions import ConfigurationError, InvalidArgumentError
from tailcache.models.trace import (
    ConversationLedger,
    Trace,
    TraceViolation,
    ValidationReport,
    ViolationKind,
)


def tokens_to_blocks(tokens: int, block_size: int) -> int:
    """Number of blocks needed to hold `tokens` tokens.

    Example:
        >>> tokens_to_blocks(257, 128)
        3
    """
    if block_size < 1:
        raise ConfigurationError(
            f"block_size must be a positive integer, got {block_size}",
            "block_size",
        )
    if tokens < 0:
        raise InvalidArgumentError("token count must be non-negative", "tokens", tokens)
    return -(-tokens // block_size)


def job_size(ledger: ConversationLedger | None, prompt_blocks: int) -> int:
    """L_i + q: blocks a request must find cached or recompute.

    A missing ledger means a fresh conversation (L = 0).
    """
    history = ledger.history_blocks if ledger is not None else 0
    return history + prompt_blocks


def replay_ledgers(trace: Trace) -> dict[int, ConversationLedger]:
    """Final ledger of every conversation after the whole trace."""
    ledgers: dict[int, ConversationLedger] = {}
    for event in trace.events:
        cid = event.conversation_id
        ledger = ledgers.setdefault(cid, ConversationLedger(cid))
        ledger.record(event)
    return ledgers


def validate_trace(trace: Trace) -> ValidationReport:
    """Report every ordering and zero-prompt violation, with event indices."""
    violations: list[TraceViolation] = []
    last_seen: dict[int, float] = {}
    previous_key: tuple[float, int] | None = None

    for index, event in enumerate(trace.events):
        key = (event.timestamp, event.conversation_id)
        if previous_key is not None and key < previous_key:
            violations.append(
                TraceViolation(
                    kind=ViolationKind.ORDERING,
                    event_index=index,
                    message=f"event sorts before its predecessor {previous_key}",
                )
            )
        elif event.timestamp <= last_seen.get(event.conversation_id, -math.inf):
            violations.append(
                TraceViolation(
                    kind=ViolationKind.ORDERING,
                    event_index=index,
                    message=(
                        f"conversation {event.conversation_id} has a non-increasing timestamp "
                        f"{event.timestamp}"
                    ),
                )
            )

        if event.prompt_blocks == 0:
            violations.append(
                TraceViolation(
                    kind=ViolationKind.ZERO_PROMPT,
                    event_index=index,
                    message=f"conversation {event.conversation_id} turn has no prompt",
                )
            )

        previous_key = key if previous_key is None else max(previous_key, key)
        last_seen[event.conversation_id] = max(
            last_seen.get(event.conversation_id, event.timestamp), event.timestamp
        )

    return ValidationReport(violations=violations)
