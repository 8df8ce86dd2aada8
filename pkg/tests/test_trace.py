"""Tests for trace accounting, lookahead and trace files."""

import json
import logging
import random

import pytest

from tailcache.core import (
    NEVER,
    Lookahead,
    NextArrival,
    job_size,
    replay_ledgers,
    tokens_to_blocks,
    validate_trace,
)
from tailcache.exceptions import (
    ConfigurationError,
    InvalidArgumentError,
    TraceParseError,
    TraceValidationError,
    WorkloadError,
)
from tailcache.models import ConversationLedger, Trace, TurnEvent, ViolationKind
from tailcache.workload import fit_prompt_distribution, load_conversations, write_trace
from tests.helpers import make_trace, random_trace


def _write_lines(path, rows):
    path.write_text("".join(json.dumps(row) + "\n" for row in rows))
    return path


class TestBlocks:
    """Tests for block quantization and job sizes."""

    def test_tokens_to_blocks_rounds_up(self):
        """Test partial blocks count as whole blocks."""
        assert tokens_to_blocks(257, 128) == 3
        assert tokens_to_blocks(256, 128) == 2
        assert tokens_to_blocks(0, 16) == 0
        assert tokens_to_blocks(5, 1) == 5

    def test_bad_block_size(self):
        """Test a non-positive block size is a configuration error."""
        with pytest.raises(ConfigurationError):
            tokens_to_blocks(10, 0)

    def test_negative_tokens(self):
        """Test negative token counts are rejected."""
        with pytest.raises(InvalidArgumentError):
            tokens_to_blocks(-1, 16)

    def test_job_size(self):
        """Test job size is history plus prompt; a new conversation has no history."""
        ledger = ConversationLedger(conversation_id=0, history_blocks=30)
        assert job_size(ledger, 5) == 35
        assert job_size(None, 5) == 5

    def test_replay_ledgers(self, revisit_trace):
        """Test ledgers accumulate prompts and responses per conversation."""
        ledgers = replay_ledgers(revisit_trace)
        assert ledgers[0].history_blocks == 200
        assert ledgers[0].turn_count == 2
        assert ledgers[0].last_turn_timestamp == 2.0
        assert ledgers[1].history_blocks == 100

    def test_tokens_to_blocks_monotone_and_exact(self):
        """Test quantization never decreases with more tokens and is exact on whole blocks."""
        rng = random.Random(21)
        for _ in range(500):
            block_size = rng.randint(1, 256)
            tokens = rng.randint(0, 100_000)
            blocks = tokens_to_blocks(tokens, block_size)
            assert tokens_to_blocks(tokens + rng.randint(0, 500), block_size) >= blocks
            assert (blocks - 1) * block_size < tokens <= blocks * block_size or tokens == 0
            n = rng.randint(0, 1000)
            assert tokens_to_blocks(n * block_size, block_size) == n

    def test_ledgers_are_prefix_sums(self):
        """Test every job size and final history match running sums over random traces."""
        rng = random.Random(22)
        for _ in range(100):
            trace = random_trace(rng, conversations=5, turns=30, max_blocks=20)
            ledgers: dict[int, ConversationLedger] = {}
            sums: dict[int, int] = {}
            for event in trace.events:
                cid = event.conversation_id
                prior = sum(
                    e.prompt_blocks + e.response_blocks
                    for e in trace.events
                    if e.conversation_id == cid and e.timestamp < event.timestamp
                )
                job = job_size(ledgers.get(cid), event.prompt_blocks)
                assert job == prior + event.prompt_blocks
                ledgers.setdefault(cid, ConversationLedger(cid)).record(event)
                sums[cid] = prior + event.prompt_blocks + event.response_blocks
            final = replay_ledgers(trace)
            assert {cid: ledger.history_blocks for cid, ledger in final.items()} == sums


class TestValidateTrace:
    """Tests for validate_trace."""

    def test_valid_trace(self, revisit_trace):
        """Test a sorted trace with prompts passes."""
        assert validate_trace(revisit_trace).is_valid

    def test_out_of_order(self):
        """Test an event sorting before its predecessor is flagged."""
        trace = Trace(
            events=(
                TurnEvent(conversation_id=0, timestamp=2.0, prompt_blocks=1),
                TurnEvent(conversation_id=1, timestamp=1.0, prompt_blocks=1),
            )
        )
        report = validate_trace(trace)
        assert [(v.kind, v.event_index) for v in report.violations] == [
            (ViolationKind.ORDERING, 1)
        ]

    def test_repeated_timestamp_within_conversation(self):
        """Test a conversation may not issue two turns at the same time."""
        trace = make_trace((0, 1.0, 1, 0), (0, 1.0, 1, 0))
        report = validate_trace(trace)
        assert [v.event_index for v in report.of_kind(ViolationKind.ORDERING)] == [1]

    def test_zero_prompt(self):
        """Test an empty prompt is flagged with its index."""
        trace = make_trace((0, 0.0, 1, 0), (1, 1.0, 0, 0))
        report = validate_trace(trace)
        assert [v.event_index for v in report.of_kind(ViolationKind.ZERO_PROMPT)] == [1]
        assert not report.of_kind(ViolationKind.ORDERING)


class TestLookahead:
    """Tests for the clairvoyant pre-pass."""

    def test_next_arrivals(self, revisit_trace):
        """Test each event sees its conversation's next request."""
        lookahead = Lookahead.from_trace(revisit_trace)
        assert len(lookahead) == 3
        assert lookahead.next_after(0) == NextArrival(2.0, 100)
        assert lookahead.next_after(1) is NEVER
        assert lookahead.next_after(2) is NEVER

    def test_is_final(self, revisit_trace):
        """Test final turns are those with no next arrival."""
        lookahead = Lookahead.from_trace(revisit_trace)
        assert [lookahead.is_final(i) for i in range(3)] == [False, True, True]
        assert not NEVER.returns


class TestTraceFiles:
    """Tests for loading and writing canonical trace files."""

    def test_load_reindexes_by_first_arrival(self, tmp_path):
        """Test string ids become dense indices in first-arrival order."""
        path = _write_lines(
            tmp_path / "t.ndjson",
            [
                {"conversation_id": "b", "timestamp": 1.0, "prompt_tokens": 20},
                {"conversation_id": "a", "timestamp": 0.5, "prompt_tokens": 17,
                 "response_tokens": 3, "is_last_turn": True},
                {"conversation_id": "b", "timestamp": 2.0, "prompt_tokens": 1},
            ],
        )
        trace = load_conversations(path, block_size=16)
        assert [(e.conversation_id, e.prompt_blocks, e.response_blocks) for e in trace.events] == [
            (0, 2, 1),
            (1, 2, 0),
            (1, 1, 0),
        ]
        assert trace.events[0].is_last_turn is True
        assert trace.block_size == 16

    def test_write_then_load(self, tmp_path, revisit_trace):
        """Test a written trace loads back to the same events."""
        path = write_trace(revisit_trace, tmp_path / "out" / "revisit.ndjson")
        assert load_conversations(path) == revisit_trace

    def test_max_turns_truncates(self, tmp_path, revisit_trace, caplog):
        """Test the turn cap keeps the earliest turns and warns."""
        path = write_trace(revisit_trace, tmp_path / "t.ndjson")
        with caplog.at_level(logging.WARNING):
            trace = load_conversations(path, max_turns=2)
        assert trace.horizon == 2
        assert "keeping the first 2 of 3 turns" in caplog.text

    def test_invalid_json_reports_line(self, tmp_path):
        """Test malformed JSON raises with its line number."""
        path = tmp_path / "bad.ndjson"
        path.write_text(
            json.dumps({"conversation_id": 0, "timestamp": 0.0, "prompt_tokens": 1})
            + "\n\n{not json}\n"
        )
        with pytest.raises(TraceParseError) as exc_info:
            load_conversations(path)
        assert exc_info.value.line_number == 3

    def test_missing_field_reports_line(self, tmp_path):
        """Test a record without prompt_tokens names the field."""
        path = _write_lines(tmp_path / "bad.ndjson", [{"conversation_id": 0, "timestamp": 0.0}])
        with pytest.raises(TraceParseError) as exc_info:
            load_conversations(path)
        assert exc_info.value.line_number == 1
        assert "prompt_tokens" in exc_info.value.message

    def test_zero_prompt_rejected(self, tmp_path):
        """Test loading validates the trace."""
        path = _write_lines(
            tmp_path / "t.ndjson",
            [{"conversation_id": 0, "timestamp": 0.0, "prompt_tokens": 0}],
        )
        with pytest.raises(TraceValidationError) as exc_info:
            load_conversations(path)
        assert exc_info.value.report.of_kind(ViolationKind.ZERO_PROMPT)

    def test_fit_prompt_distribution(self, revisit_trace):
        """Test the empirical prompt distribution of a trace."""
        dist = fit_prompt_distribution(revisit_trace)
        assert dist.support == ((100, 1.0),)
        with pytest.raises(WorkloadError):
            fit_prompt_distribution(Trace())
