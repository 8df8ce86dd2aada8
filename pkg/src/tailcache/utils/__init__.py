"""Utility functions for tailcache."""

from tailcache.utils.errors import friendly_error

__all__ = [
    "friendly_error",
]
