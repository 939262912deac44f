"""Tests for the invariants package."""
