"""Fractional orders and their rational approximations."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from ..exceptions import ConfigError


@dataclass(frozen=True)
class FractionalOrder:
    """A real order in (0, 1), optionally with a rational form p/q."""

    alpha: float
    p: Optional[int] = None
    q: Optional[int] = None

    def __post_init__(self) -> None:
        """Validate the order and its rational form."""
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"fractional order must lie in (0, 1), got {self.alpha}")
        if (self.p is None) != (self.q is None):
            raise ConfigError("rational form needs both p and q")
        if self.p is not None and self.q is not None:
            if not 0 < self.p < self.q or gcd(self.p, self.q) != 1:
                raise ConfigError(f"invalid rational form {self.p}/{self.q}")

    @classmethod
    def rationalized(cls, alpha: float, max_denominator: int) -> "FractionalOrder":
        """Order together with its best continued-fraction convergent."""
        p, q = rationalize_order(alpha, max_denominator)
        return cls(alpha=alpha, p=p, q=q)

    @property
    def error(self) -> float:
        """alpha - p/q, zero when no rational form is attached."""
        if self.p is None or self.q is None:
            return 0.0
        return self.alpha - self.p / self.q


def rationalize_order(x: float, max_denominator: int) -> tuple[int, int]:
    """Best rational approximation of x with denominator in range.

    Candidates are the continued-fraction convergents and the semiconvergents
    between them, so (0.413, 600) gives 216/523 rather than the convergent
    197/477. x is read through its shortest decimal repr, which keeps
    0.413 equal to 413/1000 instead of its binary expansion.

    Args:
        x: Real number in (0, 1).
        max_denominator: Largest admissible q, at least 2.

    Returns:
        Coprime pair (p, q) with 0 < p < q.

    Raises:
        ConfigError: x outside (0, 1), max_denominator < 2, or no p/q in
            (0, 1) fits the denominator bound.
    """
    if not 0.0 < x < 1.0:
        raise ConfigError(f"order must lie in (0, 1), got {x}")
    if max_denominator < 2:
        raise ConfigError(f"max_denominator must be at least 2, got {max_denominator}")
    best = Fraction(repr(float(x))).limit_denominator(max_denominator)
    if not 0 < best < 1:
        raise ConfigError(
            f"no order p/q in (0, 1) with q <= {max_denominator} approximates {x}"
        )
    return best.numerator, best.denominator
