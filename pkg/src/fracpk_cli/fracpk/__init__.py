"""fracpk package."""
