"""Matsuda-Fujii continued-fraction interpolation of a frequency response."""

import logging
from collections.abc import Callable
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..exceptions import DegenerateApproximationError
from .rational import RationalTransferFunction


logger = logging.getLogger(__name__)

BLOWUP_TOLERANCE = 1e-14


def geometric_points(beta: float, k_min: int, k_max: int) -> npt.NDArray[np.float64]:
    """Nodes s_k = beta^k for k = k_min..k_max."""
    if not beta > 1.0:
        raise ConfigError(f"node ratio must exceed 1, got {beta}")
    if k_max < k_min:
        raise ConfigError(f"empty node range {k_min}:{k_max}")
    return beta ** np.arange(k_min, k_max + 1, dtype=np.float64)


def continued_fraction_coefficients(
    H: Callable[[npt.NDArray[np.complex128]], npt.ArrayLike],  # noqa: N803
    points: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    """Coefficients a_i of H(s) ~ a_0 + (s - s_0)/(a_1 + (s - s_1)/(a_2 + ...)).

    Runs the recurrence v_{i+1}(s_k) = (s_k - s_i)/(v_i(s_k) - a_i) with
    a_i = v_i(s_i) on the node table.

    Raises:
        DegenerateApproximationError: Some v_i(s_k) - a_i vanishes, or H is
            not real on the nodes.
    """
    samples = np.asarray(H(points.astype(np.complex128)), dtype=np.complex128)
    if not np.all(np.isfinite(samples)):
        raise DegenerateApproximationError("H is not finite at every node")
    scale = max(float(np.max(np.abs(samples))), 1.0)
    if np.max(np.abs(samples.imag)) > 1e-12 * scale:
        raise DegenerateApproximationError("H must be real on the positive real nodes")
    v = samples.real.copy()
    coefficients = np.empty(len(points))
    for i in range(len(points)):
        coefficients[i] = v[i]
        if i + 1 == len(points):
            break
        differences = v[i + 1 :] - coefficients[i]
        if np.any(np.abs(differences) <= BLOWUP_TOLERANCE * max(1.0, abs(coefficients[i]))):
            raise DegenerateApproximationError(
                f"continued fraction blows up after node {i}; degenerate point set"
            )
        v[i + 1 :] = (points[i + 1 :] - points[i]) / differences
    return coefficients


def matsuda_fujii(
    H: Callable[[npt.NDArray[np.complex128]], npt.ArrayLike],  # noqa: N803
    points: Sequence[float],
) -> RationalTransferFunction:
    """Rational interpolant of H through the given positive nodes.

    An odd node count gives equal numerator and denominator degrees; an even
    count gives a numerator one degree above the denominator.

    Args:
        H: Function of s, real on the positive axis.
        points: Distinct positive nodes.

    Returns:
        The flattened continued fraction.

    Raises:
        ConfigError: Nodes not distinct and positive.
        DegenerateApproximationError: Blow-up in the recurrence.
    """
    nodes = np.asarray(points, dtype=np.float64)
    if len(nodes) == 0 or np.any(nodes <= 0):
        raise ConfigError("Matsuda-Fujii nodes must be positive")
    if len(np.unique(nodes)) != len(nodes):
        raise ConfigError("Matsuda-Fujii nodes must be distinct")
    coefficients = continued_fraction_coefficients(H, nodes)

    # flatten from the innermost level: R_i = a_i + (s - s_i) / R_{i+1}
    numerator = np.array([coefficients[-1]])
    denominator = np.array([1.0])
    for i in range(len(nodes) - 2, -1, -1):
        numerator, denominator = (
            np.polyadd(coefficients[i] * numerator, np.polymul([1.0, -nodes[i]], denominator)),
            numerator,
        )
    logger.debug("Matsuda-Fujii interpolant through %d nodes", len(nodes))
    return RationalTransferFunction(numerator, denominator)
