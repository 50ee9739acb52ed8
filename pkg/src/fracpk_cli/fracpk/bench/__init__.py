"""Benchmark command package."""
