"""Tests for calculus package."""
