"""Inversion by kernel substitution, the reference method.

Replacing the kernel e^{st} by e^{st} / (1 + e^{-2a} e^{2st}) puts simple poles
on the line Re(st) = a. Closing the Bromwich contour to the right then gives

    f(t) ~ e^a / t * sum_{n >= 1} (-1)^n Im F((a + j(n - 1/2) pi) / t),

with relative error about e^{-2a}. The alternating tail is accelerated by
Euler summation: binomially weighted averaging of the last partial sums.
"""

import logging

import numpy as np
import numpy.typing as npt
from scipy.stats import binom

from ..exceptions import ConfigError
from ..exceptions import InversionError
from .transform import InversionConfig
from .transform import TransformFunction


logger = logging.getLogger(__name__)


def euler_weights(term_count: int) -> tuple[int, npt.NDArray[np.float64]]:
    """Number of directly summed terms and the averaging weights.

    The last third of the terms is averaged with binomial(K, 1/2) weights.
    """
    tail = max(term_count // 3, 1)
    return term_count - tail, binom.pmf(np.arange(tail + 1), tail, 0.5)


def valsa_invert_many(
    F: TransformFunction,  # noqa: N803
    times: npt.NDArray[np.float64],
    config: InversionConfig,
) -> npt.NDArray[np.float64]:
    """Kernel-substitution inversion at several positive times.

    Args:
        F: Transform to invert.
        times: Positive times.
        config: a and term_count are used.

    Returns:
        f at every time.

    Raises:
        ConfigError: Some time is not positive.
        InversionError: F is not finite at a node; carries the time.
    """
    times = np.asarray(times, dtype=np.float64).reshape(-1)
    if len(times) == 0:
        return np.empty(0)
    if np.any(times <= 0):
        raise ConfigError("Valsa inversion needs t > 0")
    direct, weights = euler_weights(config.terms)
    n = np.arange(1, config.terms + 1)
    nodes = (config.a + 1j * (n - 0.5) * np.pi)[np.newaxis, :] / times[:, np.newaxis]
    with np.errstate(all="ignore"):
        values = np.asarray(F(nodes), dtype=np.complex128)
    finite = np.isfinite(values)
    if not np.all(finite):
        bad = int(np.argmax(~np.all(finite, axis=1)))
        raise InversionError(f"transform {F.label!r} is not finite at a Valsa node", float(times[bad]))
    terms = np.where(n % 2 == 0, 1.0, -1.0) * values.imag
    partial = np.cumsum(terms, axis=1)
    accelerated = partial[:, direct - 1 :] @ weights
    return np.exp(config.a) / times * accelerated


def valsa_invert(
    F: TransformFunction, t: float, config: InversionConfig  # noqa: N803
) -> float:
    """Kernel-substitution inversion of F at one time t > 0."""
    logger.debug("Valsa inversion at t=%r, a=%r, terms=%d", t, config.a, config.terms)
    return float(valsa_invert_many(F, np.array([t]), config)[0])
