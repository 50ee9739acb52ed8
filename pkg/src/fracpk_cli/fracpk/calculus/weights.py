"""Grünwald-Letnikov binomial weights."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError


@dataclass(frozen=True)
class GLWeightSequence:
    """Weights c_j = (-1)^j binom(alpha, j) for j = 0..len(weights)-1."""

    alpha: float
    weights: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        """Check the two weights fixed by definition."""
        if self.weights[0] != 1.0 or (
            len(self.weights) > 1 and self.weights[1] != -self.alpha
        ):
            raise ConfigError("GL weights must start with 1, -alpha")

    def __len__(self) -> int:
        """Number of weights, memory length plus one."""
        return len(self.weights)


def binomial_series(order: float, count: int) -> npt.NDArray[np.float64]:
    """Coefficients of (1 - z)^order up to z^count.

    Multiplicative recurrence w_j = w_{j-1} (j - 1 - order) / j, valid for any
    real order, including the negative orders the convolution quadrature needs.

    Args:
        order: Real exponent.
        count: Index of the last coefficient.

    Returns:
        Array of count + 1 coefficients.
    """
    steps = np.arange(1, count + 1, dtype=np.float64)
    factors = (steps - 1.0 - order) / steps
    return np.concatenate(([1.0], np.cumprod(factors)))


def gl_weights(alpha: float, count: int) -> GLWeightSequence:
    """GL weights c_0..c_count of a derivative of order alpha.

    Args:
        alpha: Derivative order in (0, 1].
        count: Index of the last weight, at least 1.

    Returns:
        The weight sequence.

    Raises:
        ConfigError: alpha outside (0, 1] or count < 1.
    """
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"GL order must lie in (0, 1], got {alpha}")
    if count < 1:
        raise ConfigError(f"GL weight count must be at least 1, got {count}")
    return GLWeightSequence(alpha=alpha, weights=binomial_series(alpha, count))
