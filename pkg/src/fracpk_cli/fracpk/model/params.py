"""Parameters and transfer functions of the fractional two-compartment model.

    dA1/dt = -(k12 + k10) A1 + k21 D^{1-alpha} A2 + u
    dA2/dt = k12 A1 - k21 D^{1-alpha} A2

Amounts in ng, time in days.
"""

from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import replace

import numpy as np

from ..exceptions import ConfigError
from ..invlap.transform import ComplexArg
from ..invlap.transform import TransformFunction
from ..settings import NOMINAL_ALPHA
from ..settings import NOMINAL_K10
from ..settings import NOMINAL_K12
from ..settings import NOMINAL_K21


@dataclass(frozen=True)
class PKParams:
    """Model constants: alpha, k10 and k12 in 1/day, k21 in 1/day^alpha."""

    alpha: float
    k10: float
    k12: float
    k21: float

    def __post_init__(self) -> None:
        """Validate the constants.

        Rate constants may be zero, which switches off elimination or exchange.
        """
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        for name in ("k10", "k12", "k21"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0.0):
                raise ConfigError(f"{name} must be a non-negative number, got {value}")

    @property
    def memory_order(self) -> float:
        """Order 1 - alpha of the Caputo term acting on A2."""
        return 1.0 - self.alpha

    def with_overrides(self, **overrides: float) -> "PKParams":
        """Copy with some constants replaced."""
        return replace(self, **overrides)

    def to_dict(self) -> dict[str, float]:
        """Serializable form."""
        return asdict(self)


def nominal_params() -> PKParams:
    """Nominal Amiodarone constants."""
    return PKParams(
        alpha=NOMINAL_ALPHA, k10=NOMINAL_K10, k12=NOMINAL_K12, k21=NOMINAL_K21
    )


def characteristic(params: PKParams, s: ComplexArg, s_alpha: ComplexArg) -> ComplexArg:
    """Common denominator s^(alpha+1) + k21 s + (k12 + k10) s^alpha + k10 k21."""
    return (
        s * s_alpha
        + params.k21 * s
        + (params.k12 + params.k10) * s_alpha
        + params.k10 * params.k21
    )


def transfer_functions(
    params: PKParams,
) -> tuple[TransformFunction, TransformFunction]:
    """Dose-to-amount transfer functions G1, G2 on the principal branch.

    G1 = (s^alpha + k21) / den and G2 = k12 s^(alpha-1) / den.

    Args:
        params: Model constants.

    Returns:
        G1 and G2 as transforms accepting complex scalars or arrays.
    """

    def g1(s: ComplexArg) -> ComplexArg:
        s = np.asarray(s, dtype=np.complex128)
        s_alpha = s**params.alpha
        return (s_alpha + params.k21) / characteristic(params, s, s_alpha)

    def g2(s: ComplexArg) -> ComplexArg:
        s = np.asarray(s, dtype=np.complex128)
        s_alpha = s**params.alpha
        return params.k12 * s_alpha / s / characteristic(params, s, s_alpha)

    return TransformFunction(g1, 0.0, "G1"), TransformFunction(g2, 0.0, "G2")
