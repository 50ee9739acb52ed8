"""Tests for bench package."""
