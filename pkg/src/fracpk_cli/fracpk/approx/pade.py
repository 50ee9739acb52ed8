"""Padé approximation of s^alpha about a real expansion point.

For n > m the approximant is s times the [m/n] Padé approximant of
s^(alpha - 1), which keeps every pole in the left half plane; the result
has numerator degree m + 1 and still matches m + n + 1 Taylor coefficients
of s^alpha at s0. For n == m the diagonal approximant of s^alpha is used
directly.
"""

import logging

import numpy as np
from scipy.interpolate import pade
from scipy.linalg import LinAlgError
from scipy.special import binom

from ..exceptions import ConfigError
from ..exceptions import DegenerateApproximationError
from ..settings import PADE_EXPANSION_POINT
from .rational import RationalTransferFunction


logger = logging.getLogger(__name__)


def taylor_coefficients(alpha: float, s0: float, count: int) -> np.ndarray:
    """f^(k)(s0)/k! = binom(alpha, k) s0^(alpha - k) for f(s) = s^alpha."""
    k = np.arange(count, dtype=np.float64)
    return binom(alpha, k) * s0 ** (alpha - k)


def pade_s_alpha(
    alpha: float, s0: float = PADE_EXPANSION_POINT, m: int = 2, n: int = 3
) -> RationalTransferFunction:
    """[m/n] Padé approximant of s^alpha expanded about s0.

    The approximant is built in x = s - s0 and shifted back to s.

    Args:
        alpha: Order in (0, 1).
        s0: Positive expansion point.
        m: Numerator degree of the Padé table entry.
        n: Denominator degree, at least m.

    Returns:
        The approximant in powers of s. Its numerator has degree m + 1
        when n > m.

    Raises:
        ConfigError: Invalid arguments.
        DegenerateApproximationError: Singular Padé system.
    """
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if not s0 > 0:
        raise ConfigError(f"expansion point must be positive, got {s0}")
    if m < 0 or n < m:
        raise ConfigError(f"need 0 <= m <= n, got [{m}/{n}]")
    factored = n > m
    order = alpha - 1.0 if factored else alpha
    coefficients = taylor_coefficients(order, s0, m + n + 1)
    try:
        p, q = pade(coefficients, n, m)
    except (LinAlgError, ValueError) as e:
        raise DegenerateApproximationError(f"Padé [{m}/{n}] system is singular: {e}") from e
    shift = np.poly1d([1.0, -s0])
    numerator, denominator = p(shift), q(shift)
    if not np.all(np.isfinite(denominator.coeffs)) or np.all(denominator.coeffs == 0):
        raise DegenerateApproximationError(f"Padé [{m}/{n}] denominator vanished")
    if factored:
        numerator = numerator * np.poly1d([1.0, 0.0])
    approximant = RationalTransferFunction(numerator.coeffs, denominator.coeffs)
    _, poles, _ = approximant.zpk()
    if np.any(poles.real >= 0.0):
        logger.warning(
            "Padé [%d/%d] about s0=%r has poles %s off the left half plane", m, n, s0, poles
        )
    logger.debug("Padé [%d/%d] about s0=%r built", m, n, s0)
    return approximant
