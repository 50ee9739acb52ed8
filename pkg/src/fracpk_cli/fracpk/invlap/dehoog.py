"""Fourier-series inversion with quotient-difference acceleration.

The Bromwich integral along Re(s) = gamma is discretized by the trapezoid
rule, which turns it into a Fourier series with half period T. Its partial
sums are accelerated by rewriting the series as a continued fraction whose
coefficients come from the quotient-difference table.
"""

import logging

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..exceptions import ConvergenceError
from ..exceptions import InversionError
from .transform import InversionConfig
from .transform import TransformFunction


logger = logging.getLogger(__name__)


def continued_fraction_coefficients(
    fp: npt.NDArray[np.complex128], degree: int
) -> npt.NDArray[np.complex128]:
    """Continued-fraction coefficients d_0..d_2M from 2M + 1 series terms."""
    size = 2 * degree + 1
    e = np.zeros((size, degree + 1), dtype=np.complex128)
    q = np.zeros((size, degree), dtype=np.complex128)
    d = np.zeros(size, dtype=np.complex128)

    q[0, 0] = fp[1] / (fp[0] / 2.0)
    q[1 : 2 * degree, 0] = fp[2 : 2 * degree + 1] / fp[1 : 2 * degree]

    # rhombus rules
    for r in range(1, degree + 1):
        mr = 2 * (degree - r)
        e[0:mr, r] = q[1 : mr + 1, r - 1] - q[0:mr, r - 1] + e[1 : mr + 1, r - 1]
        if r < degree:
            mq = 2 * (degree - r) - 1
            q[0:mq, r] = q[1 : mq + 1, r - 1] * e[1 : mq + 1, r] / e[0:mq, r]

    d[0] = fp[0] / 2.0
    for r in range(1, degree + 1):
        d[2 * r - 1] = -q[0, r - 1]
        d[2 * r] = -e[0, r]
    return d


def _invert_block(
    F: TransformFunction,  # noqa: N803
    times: npt.NDArray[np.float64],
    half_period: float,
    config: InversionConfig,
) -> npt.NDArray[np.float64]:
    """Invert at times sharing one half period."""
    degree = (config.terms - 1) // 2
    size = 2 * degree + 1
    gamma = config.sigma0 - np.log(config.tolerance) / (2 * half_period)
    nodes = gamma + 1j * np.pi * np.arange(size) / half_period
    with np.errstate(all="ignore"):
        fp = np.asarray(F(nodes), dtype=np.complex128)
        if not np.all(np.isfinite(fp)):
            raise InversionError(
                f"transform {F.label!r} is not finite on the Fourier contour",
                float(times[-1]),
            )
        d = continued_fraction_coefficients(fp, degree)
    if not np.all(np.isfinite(d)):
        raise InversionError("quotient-difference table broke down", float(times[-1]))

    z = np.exp(1j * np.pi * times / half_period)
    a_prev, a_cur = np.zeros_like(z), np.full_like(z, d[0])
    b_prev, b_cur = np.ones_like(z), np.ones_like(z)
    for i in range(1, 2 * degree):
        a_prev, a_cur = a_cur, a_cur + d[i] * a_prev * z
        b_prev, b_cur = b_cur, b_cur + d[i] * b_prev * z

    # improved remainder for the last term
    brem = (1.0 + (d[2 * degree - 1] - d[2 * degree]) * z) / 2.0
    rem = -brem * (1.0 - np.sqrt(1.0 + d[2 * degree] * z / brem**2))
    a_last = a_cur + rem * a_prev
    b_last = b_cur + rem * b_prev

    scale = np.exp(gamma * times) / half_period
    values = scale * (a_last / b_last).real
    residual = np.abs(scale * (a_last / b_last - a_cur / b_cur))
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.isfinite(values)))
        raise InversionError("continued fraction evaluation failed", float(times[bad]))
    limit = np.sqrt(config.tolerance) * np.maximum(1.0, np.abs(values))
    if np.any(residual > limit):
        bad = int(np.argmax(residual - limit))
        raise ConvergenceError(
            f"Fourier series acceleration did not settle at t={float(times[bad])!r}: "
            f"residual {residual[bad]:.3e}"
        )
    return values


def fourier_trapezoid_invert_many(
    F: TransformFunction,  # noqa: N803
    times: npt.NDArray[np.float64],
    config: InversionConfig,
) -> npt.NDArray[np.float64]:
    """Fourier-series inversion at several positive times.

    Times are split into decades and each decade gets its own half period,
    since one contour for times spanning several orders of magnitude loses
    accuracy at the small ones.

    Args:
        F: Transform to invert.
        times: Positive times.
        config: sigma0, half period, tolerance and term_count are used.

    Returns:
        f at every time.

    Raises:
        ConfigError: A time outside (0, 2T).
        InversionError: F not finite on the contour.
        ConvergenceError: The acceleration residual exceeds tolerance.
    """
    times = np.asarray(times, dtype=np.float64).reshape(-1)
    result = np.empty_like(times)
    if len(times) == 0:
        return result
    if np.any(times <= 0):
        raise ConfigError("Fourier-series inversion needs t > 0")

    if config.half_period is not None:
        if np.any(times >= 2 * config.half_period):
            raise ConfigError(
                f"times must stay below 2T = {2 * config.half_period}"
            )
        result[:] = _invert_block(F, times, config.half_period, config)
        return result

    decades = np.floor(np.log10(times)).astype(int)
    for decade in np.unique(decades):
        mask = decades == decade
        block = times[mask]
        half_period = config.half_period_factor * float(np.max(block))
        logger.debug(
            "Fourier inversion of %d points, T=%r, terms=%d",
            len(block),
            half_period,
            config.terms,
        )
        result[mask] = _invert_block(F, block, half_period, config)
    return result


def fourier_trapezoid_invert(
    F: TransformFunction, t: float, config: InversionConfig  # noqa: N803
) -> float:
    """Fourier-series inversion of F at one time t > 0."""
    return float(fourier_trapezoid_invert_many(F, np.array([t]), config)[0])
