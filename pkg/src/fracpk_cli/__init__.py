"""Fractional PK CLI."""
