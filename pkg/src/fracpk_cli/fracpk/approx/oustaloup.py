"""Oustaloup band-limited approximation of s^alpha."""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..settings import OUSTALOUP_MAX_N
from .rational import RationalTransferFunction


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OustaloupDesign:
    """Corner frequencies and gain of a 2N+1 pole/zero filter (rad/day)."""

    alpha: float
    omega_b: float
    omega_h: float
    N: int  # noqa: N815
    zero_frequencies: npt.NDArray[np.float64]
    pole_frequencies: npt.NDArray[np.float64]
    gain: float

    @property
    def center_frequency(self) -> float:
        """Geometric mean of the band edges."""
        return float(np.sqrt(self.omega_b * self.omega_h))

    def transfer_function(self) -> RationalTransferFunction:
        """gain * prod (s + w_k) / (s + w'_k), factored."""
        return RationalTransferFunction.from_zpk(
            -self.zero_frequencies, -self.pole_frequencies, self.gain
        )

    def band_errors(self, points: int = 200) -> tuple[float, float]:
        """Worst magnitude error in dB over the band and phase error at the center.

        Returns:
            max |20 log10(|H(jw)| / w^alpha)| on log-spaced w, and
            |arg H(j w_u) - alpha 90| in degrees.
        """
        omega = np.logspace(np.log10(self.omega_b), np.log10(self.omega_h), points)
        response = self.transfer_function().frequency_response(omega)
        magnitude = np.max(np.abs(20 * np.log10(np.abs(response) / omega**self.alpha)))
        center = self.transfer_function().frequency_response([self.center_frequency])[0]
        phase = abs(np.degrees(np.angle(center)) - 90.0 * self.alpha)
        return float(magnitude), float(phase)


def oustaloup_design(
    alpha: float, omega_b: float, omega_h: float, N: int  # noqa: N803
) -> OustaloupDesign:
    """Place the corner frequencies of the recursive filter.

    Zeros and poles are geometrically spaced over the band,

        w_k  = w_b (w_h/w_b)^((k + N + (1 - alpha)/2) / (2N + 1))
        w'_k = w_b (w_h/w_b)^((k + N + (1 + alpha)/2) / (2N + 1)),

    for k = -N..N, and the gain w_h^alpha makes |H(j w_u)| = w_u^alpha at the
    band center w_u = sqrt(w_b w_h).

    Raises:
        ConfigError: Invalid order or band, or N outside 1..50.
    """
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 < omega_b < omega_h:
        raise ConfigError(f"need 0 < omega_b < omega_h, got {omega_b}, {omega_h}")
    if N < 1:
        raise ConfigError(f"N must be positive, got {N}")
    if N > OUSTALOUP_MAX_N:
        raise ConfigError(f"N = {N} exceeds {OUSTALOUP_MAX_N}; coefficients would overflow")
    ratio = omega_h / omega_b
    k = np.arange(-N, N + 1, dtype=np.float64)
    zeros = omega_b * ratio ** ((k + N + 0.5 * (1 - alpha)) / (2 * N + 1))
    poles = omega_b * ratio ** ((k + N + 0.5 * (1 + alpha)) / (2 * N + 1))
    logger.debug("Oustaloup design alpha=%r band=[%r, %r] N=%d", alpha, omega_b, omega_h, N)
    return OustaloupDesign(
        alpha=alpha,
        omega_b=omega_b,
        omega_h=omega_h,
        N=N,
        zero_frequencies=zeros,
        pole_frequencies=poles,
        gain=omega_h**alpha,
    )


def oustaloup(
    alpha: float, omega_b: float, omega_h: float, N: int  # noqa: N803
) -> RationalTransferFunction:
    """Oustaloup approximation of s^alpha on [omega_b, omega_h]."""
    return oustaloup_design(alpha, omega_b, omega_h, N).transfer_function()
