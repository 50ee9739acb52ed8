"""Numerical inverse Laplace transform package."""
