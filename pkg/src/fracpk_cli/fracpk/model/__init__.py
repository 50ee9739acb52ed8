"""Pharmacokinetic model package."""
