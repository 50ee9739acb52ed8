"""Schedule and population command package."""
