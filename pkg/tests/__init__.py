"""Tests for tailcache."""
