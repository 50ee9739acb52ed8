"""Tests for model package."""
