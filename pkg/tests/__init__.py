"""Tests for skein-integrator."""
