"""The bolus scenario every solver is scored on."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..invlap.transform import TransformFunction
from .params import PKParams
from .params import transfer_functions


@dataclass(frozen=True)
class BolusScenario:
    """An i.v. bolus of dose ng into plasma at t = 0, no tissue amount."""

    dose: float
    params: PKParams

    @property
    def initial_amounts(self) -> npt.NDArray[np.float64]:
        """(A1(0), A2(0)), the GL initial state."""
        return np.array([self.dose, 0.0])

    def transforms(self) -> tuple[TransformFunction, TransformFunction]:
        """dose * G1 and dose * G2, the inverse Laplace targets."""
        g1, g2 = transfer_functions(self.params)
        return g1.scaled(self.dose), g2.scaled(self.dose)


def bolus_scenario(dose: float, params: PKParams) -> BolusScenario:
    """Bolus scenario of the given dose.

    Raises:
        ConfigError: Negative dose.
    """
    if dose < 0:
        raise ConfigError(f"dose must be non-negative, got {dose}")
    return BolusScenario(dose=float(dose), params=params)
