"""Version information."""

__version__ = "2026.10.18"
