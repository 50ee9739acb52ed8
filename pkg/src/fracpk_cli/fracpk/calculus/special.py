"""Special functions: gamma and a small-argument Mittag-Leffler oracle."""

import logging
import math

import numpy as np
from scipy.special import gamma
from scipy.special import gammaln

from ..exceptions import ConfigError
from ..exceptions import ConvergenceError
from ..settings import ML_MAX_TERMS
from ..settings import ML_TOLERANCE


logger = logging.getLogger(__name__)

ML_ARGUMENT_LIMIT = 10.0


def gamma_fn(x: float) -> float:
    """Gamma function on the positive reals.

    Raises:
        ConfigError: x <= 0.
    """
    if not x > 0.0:
        raise ConfigError(f"gamma_fn is defined here for x > 0 only, got {x}")
    return float(gamma(x))


def mittag_leffler_series(
    alpha: float,
    beta: float,
    t: float,
    tolerance: float = ML_TOLERANCE,
    max_terms: int = ML_MAX_TERMS,
) -> float:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(t) by its series.

    Terms are summed until the first omitted one drops below tolerance past
    the peak of the series. Terms are built in log space so large powers of t
    do not overflow.

    Args:
        alpha: Positive real.
        beta: Positive real.
        t: Argument, |t| <= 10.
        tolerance: Absolute truncation tolerance.
        max_terms: Term cap.

    Returns:
        The series value.

    Raises:
        ConfigError: Parameters outside the contract.
        ConvergenceError: Term cap reached before tolerance.
    """
    if alpha <= 0.0 or beta <= 0.0:
        raise ConfigError("Mittag-Leffler parameters must be positive")
    if abs(t) > ML_ARGUMENT_LIMIT:
        raise ConfigError(f"series oracle only covers |t| <= {ML_ARGUMENT_LIMIT}")
    if t == 0.0:
        return 1.0 / gamma_fn(beta)

    log_abs_t = math.log(abs(t))
    sign = -1.0 if t < 0 else 1.0
    total = 0.0
    previous = math.inf
    for k in range(max_terms):
        magnitude = math.exp(k * log_abs_t - gammaln(alpha * k + beta))
        total += sign**k * magnitude
        next_magnitude = math.exp(
            (k + 1) * log_abs_t - gammaln(alpha * (k + 1) + beta)
        )
        if next_magnitude < tolerance and next_magnitude <= magnitude <= previous:
            logger.debug("Mittag-Leffler series converged after %d terms", k + 1)
            return float(total)
        previous = magnitude
    raise ConvergenceError(
        f"Mittag-Leffler series did not reach tolerance {tolerance} in {max_terms} terms"
    )


def mittag_leffler_grid(
    alpha: float, beta: float, values: np.ndarray, tolerance: float = ML_TOLERANCE
) -> np.ndarray:
    """Evaluate the series oracle at every entry of values."""
    return np.array([mittag_leffler_series(alpha, beta, float(v), tolerance) for v in values])
