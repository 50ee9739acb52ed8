"""Tests for schedule package."""
