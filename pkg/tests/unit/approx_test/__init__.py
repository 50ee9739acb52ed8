"""Tests for approx package."""
