"""Command-line interface."""

from tailcache.cli.app import build_parser, main
from tailcache.cli.formatter import ReportFormatter

__all__ = [
    "build_parser",
    "main",
    "ReportFormatter",
]
