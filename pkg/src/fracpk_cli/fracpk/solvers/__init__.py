"""FDE solvers and the simulate command package."""
