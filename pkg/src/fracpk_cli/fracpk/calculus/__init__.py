"""Fractional-calculus primitives."""
