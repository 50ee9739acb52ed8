"""Substitution of an s^alpha approximant into the model transfer functions."""

import numpy as np

from ..exceptions import ConfigError
from ..exceptions import DegenerateApproximationError
from ..model.params import PKParams
from .rational import RationalTransferFunction


def substitute_into_pk(
    s_alpha_approx: RationalTransferFunction, params: PKParams
) -> tuple[RationalTransferFunction, RationalTransferFunction]:
    """Replace s^alpha by P/Q in G1 and G2 and clear fractions.

    With s^(alpha+1) = s P/Q and s^(alpha-1) = P/(s Q),

        G1 = (P + k21 Q) / D,   G2 = k12 P / (s D),
        D  = s (P + k21 Q) + (k12 + k10) P + k10 k21 Q.

    Approximants whose numerator is one degree above the denominator are
    accepted since both results are then still strictly proper.

    Args:
        s_alpha_approx: Approximant P/Q of s^alpha.
        params: Model constants.

    Returns:
        G1 and G2 as single rational functions.

    Raises:
        ConfigError: Approximant numerator degree exceeds deg Q + 1.
        DegenerateApproximationError: A result is improper.
    """
    if s_alpha_approx.relative_degree < -1:
        raise ConfigError(
            "s^alpha approximant may exceed its denominator degree by one at most"
        )
    P = s_alpha_approx.numerator  # noqa: N806
    Q = s_alpha_approx.denominator  # noqa: N806
    numerator1 = np.polyadd(P, params.k21 * Q)
    denominator = np.polyadd(
        np.polymul([1.0, 0.0], numerator1),
        np.polyadd((params.k12 + params.k10) * P, params.k10 * params.k21 * Q),
    )
    g1 = RationalTransferFunction(numerator1, denominator)
    g2 = RationalTransferFunction(params.k12 * P, np.polymul([1.0, 0.0], denominator))
    if not (g1.is_proper and g2.is_proper):
        raise DegenerateApproximationError("substituted transfer functions are improper")
    return g1, g2
