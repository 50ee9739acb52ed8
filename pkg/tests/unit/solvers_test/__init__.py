"""Tests for solvers package."""
