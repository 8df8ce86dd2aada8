"""Core trace accounting and cache state.

The arrival engine lives in `tailcache.core.engine`; it is not re-exported
here because it depends on the policies package, which depends on this one.
"""

from tailcache.core.trace import tokens_to_blocks, job_size, replay_ledgers, validate_trace
from tailcache.core.lookahead import Lookahead, NextArrival, NEVER
from tailcache.core.state import CacheEntry, CacheState

__all__ = [
    "tokens_to_blocks",
    "job_size",
    "replay_ledgers",
    "validate_trace",
    "Lookahead",
    "NextArrival",
    "NEVER",
    "CacheEntry",
    "CacheState",
]
