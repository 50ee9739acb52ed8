"""Tests for invlap package."""
