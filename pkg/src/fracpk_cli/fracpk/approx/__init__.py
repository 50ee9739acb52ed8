"""Rational approximation and the approx command package."""
