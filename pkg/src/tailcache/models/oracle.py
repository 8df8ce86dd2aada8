"""Hindsight TEL instances and solutions."""

from __future__ import annotations

from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tailcache.models.policy import CachingMode
from tailcache.models.trace import Trace, TurnEvent


class HindsightTurn(BaseModel):
    """One arrival of a conversation at a global step."""

    model_config = ConfigDict(frozen=True)

    step: int = Field(..., ge=0, description="Global arrival step")
    prompt_blocks: int = Field(..., ge=0)
    response_blocks: int = Field(default=0, ge=0)


class Arrival(NamedTuple):
    """Flattened arrival in step order."""

    step: int
    conversation_id: int
    prompt_blocks: int
    response_blocks: int
    history_blocks: int  # L_i(t), before this arrival
    is_last_turn: bool

    @property
    def job_blocks(self) -> int:
        return self.history_blocks + self.prompt_blocks


class HindsightInstance(BaseModel):
    """Deterministic trace plus capacity and threshold for the hindsight program.

    Example:
        >>> HindsightInstance(
        ...     capacity=10,
        ...     xi_blocks=0,
        ...     conversations=[[HindsightTurn(step=0, prompt_blocks=2, response_blocks=1),
        ...                     HindsightTurn(step=1, prompt_blocks=2, response_blocks=1)]],
        ... )
    """

    model_config = ConfigDict(frozen=True)

    capacity: int = Field(..., ge=0, description="C (blocks)")
    xi_blocks: int = Field(default=0, ge=0, description="xi (blocks)")
    conversations: list[list[HindsightTurn]] = Field(..., description="Turns per conversation")
    mode: CachingMode = Field(default=CachingMode.OPTIONAL)

    @model_validator(mode="after")
    def _check_steps(self) -> HindsightInstance:
        seen: set[int] = set()
        for turns in self.conversations:
            steps = [t.step for t in turns]
            if steps != sorted(steps):
                raise ValueError("turns of a conversation must be listed in step order")
            for step in steps:
                if step in seen:
                    raise ValueError(f"step {step} is shared by two arrivals; ties are not allowed")
                seen.add(step)
        return self

    @property
    def num_conversations(self) -> int:
        return len(self.conversations)

    @property
    def num_steps(self) -> int:
        return sum(len(turns) for turns in self.conversations)

    @property
    def max_turn_blocks(self) -> int:
        sizes = [
            max(t.prompt_blocks, t.response_blocks) for turns in self.conversations for t in turns
        ]
        return max(sizes, default=0)

    @property
    def total_blocks(self) -> int:
        """Blocks of every turn; no schedule can cache more than this."""
        return sum(
            t.prompt_blocks + t.response_blocks for turns in self.conversations for t in turns
        )

    @property
    def effective_capacity(self) -> int:
        """Capacity clamped to the total blocks, which leaves the optimum unchanged."""
        return min(self.capacity, self.total_blocks)

    def arrivals(self) -> list[Arrival]:
        """All arrivals in step order with their pre-arrival history."""
        flat: list[Arrival] = []
        for conversation_id, turns in enumerate(self.conversations):
            history = 0
            for position, turn in enumerate(turns):
                flat.append(
                    Arrival(
                        step=turn.step,
                        conversation_id=conversation_id,
                        prompt_blocks=turn.prompt_blocks,
                        response_blocks=turn.response_blocks,
                        history_blocks=history,
                        is_last_turn=position == len(turns) - 1,
                    )
                )
                history += turn.prompt_blocks + turn.response_blocks
        flat.sort(key=lambda a: a.step)
        return flat

    def budget(self, arrival: Arrival) -> int:
        """TEL-safe budget (L + q - xi)^+ of one arrival."""
        return max(arrival.job_blocks - self.xi_blocks, 0)

    def to_trace(self) -> Trace:
        """Trace whose timestamps are the global steps."""
        events = [
            TurnEvent(
                conversation_id=a.conversation_id,
                timestamp=float(a.step),
                prompt_blocks=a.prompt_blocks,
                response_blocks=a.response_blocks,
                is_last_turn=a.is_last_turn,
            )
            for a in self.arrivals()
        ]
        return Trace.from_events(events)

    @classmethod
    def from_trace(
        cls,
        trace: Trace,
        capacity: int,
        xi_blocks: int = 0,
        mode: CachingMode = CachingMode.OPTIONAL,
    ) -> HindsightInstance:
        """Instance whose steps follow the trace's arrival order."""
        by_conversation: dict[int, list[HindsightTurn]] = {}
        for step, event in enumerate(trace.events):
            by_conversation.setdefault(event.conversation_id, []).append(
                HindsightTurn(
                    step=step,
                    prompt_blocks=event.prompt_blocks,
                    response_blocks=event.response_blocks,
                )
            )
        ordered = [by_conversation[cid] for cid in sorted(by_conversation)]
        return cls(capacity=capacity, xi_blocks=xi_blocks, conversations=ordered, mode=mode)


class HindsightSolution(BaseModel):
    """Optimal schedule of the hindsight TEL program.

    schedule[k][i] is x_{i,t}: blocks of conversation i cached at the start of
    the k-th arrival (arrivals in step order).
    """

    schedule: list[list[int]] = Field(..., description="Cache vector before each arrival")
    tel_blocks: int = Field(..., ge=0, description="Optimal TEL / alpha")
    states_enumerated: list[int] = Field(
        default_factory=list, description="Distinct cache vectors explored per step"
    )
