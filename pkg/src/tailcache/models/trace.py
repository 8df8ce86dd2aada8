"""Trace models: turn events, traces, ledgers and validation reports."""

from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class TurnEvent(BaseModel):
    """One conversation turn as it arrives at the server.

    Example:
        >>> TurnEvent(conversation_id=0, timestamp=1.5, prompt_blocks=3, response_blocks=4)
    """

    model_config = ConfigDict(frozen=True)

    conversation_id: int = Field(..., ge=0, description="Dense conversation index")
    timestamp: float = Field(..., ge=0.0, description="Arrival time in seconds")
    prompt_blocks: int = Field(..., ge=0, description="New prompt length q (blocks)")
    response_blocks: int = Field(default=0, ge=0, description="Response length a (blocks)")
    is_last_turn: bool | None = Field(
        default=None,
        description="Ground-truth termination flag; None when the source does not know",
    )

    @property
    def turn_blocks(self) -> int:
        """Blocks this turn adds to the conversation history."""
        return self.prompt_blocks + self.response_blocks


class Trace(BaseModel):
    """Time-ordered sequence of turns replayed by the simulator."""

    model_config = ConfigDict(frozen=True)

    events: tuple[TurnEvent, ...] = Field(default=(), description="Sorted by (timestamp, id)")
    block_size: int = Field(default=1, ge=1, description="Tokens per block")

    @classmethod
    def from_events(cls, events: list[TurnEvent], block_size: int = 1) -> "Trace":
        """Build a trace, sorting by timestamp with conversation id as tie-break."""
        ordered = sorted(events, key=lambda e: (e.timestamp, e.conversation_id))
        return cls(events=tuple(ordered), block_size=block_size)

    @property
    def horizon(self) -> int:
        """Number of events (T when indexed by arrival order)."""
        return len(self.events)

    @property
    def conversation_ids(self) -> list[int]:
        """Conversation ids in first-arrival order."""
        seen: dict[int, None] = {}
        for event in self.events:
            seen.setdefault(event.conversation_id, None)
        return list(seen)

    @property
    def has_termination_flags(self) -> bool:
        """True if every event carries an is_last_turn flag."""
        return all(e.is_last_turn is not None for e in self.events)

    def mean_prompt_blocks(self) -> float:
        """Average prompt length in blocks (0.0 for an empty trace)."""
        if not self.events:
            return 0.0
        return sum(e.prompt_blocks for e in self.events) / len(self.events)

    def total_blocks(self) -> int:
        """Sum of every prompt and response block in the trace."""
        return sum(e.turn_blocks for e in self.events)


@dataclass
class ConversationLedger:
    """Running totals of one conversation.

    history_blocks is L_i, the sum of all prior prompt and response blocks.
    """

    conversation_id: int
    history_blocks: int = 0
    turn_count: int = 0
    last_turn_timestamp: float | None = None

    def record(self, event: TurnEvent) -> None:
        """Fold a served turn into the totals."""
        self.history_blocks += event.turn_blocks
        self.turn_count += 1
        self.last_turn_timestamp = event.timestamp


class ViolationKind(str, Enum):
    """Kinds of trace invariant violations."""

    ORDERING = "ordering"
    ZERO_PROMPT = "zero_prompt"


class TraceViolation(BaseModel):
    """One violated trace invariant."""

    model_config = ConfigDict(frozen=True)

    kind: ViolationKind = Field(..., description="Violated invariant")
    event_index: int = Field(..., ge=0, description="Index of the offending event")
    message: str = Field(..., description="Human-readable explanation")


class ValidationReport(BaseModel):
    """Result of validate_trace; empty means valid."""

    violations: list[TraceViolation] = Field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> list[TraceViolation]:
        """Violations of a single kind."""
        return [v for v in self.violations if v.kind == kind]
