"""Laplace-domain functions and inversion settings."""

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Optional
from typing import Union

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..settings import DEHOOG_HALF_PERIOD_FACTOR
from ..settings import DEHOOG_TERM_COUNT
from ..settings import DEHOOG_TOLERANCE
from ..settings import VALSA_A
from ..settings import VALSA_TERM_COUNT


ComplexArg = Union[complex, npt.NDArray[np.complex128]]


class InversionMethod(str, Enum):
    """Class with the available inversion methods."""

    valsa = "valsa"
    fourier_trapezoid = "fourier-trapezoid"


@dataclass(frozen=True)
class TransformFunction:
    """F(s), evaluated elementwise on complex scalars or arrays.

    abscissa is an estimate of the abscissa of convergence: F is finite for
    Re(s) > abscissa.
    """

    fn: Callable[[ComplexArg], ComplexArg]
    abscissa: float = 0.0
    label: str = ""

    def __call__(self, s: ComplexArg) -> ComplexArg:
        """Evaluate F."""
        return self.fn(s)

    def scaled(self, factor: float) -> "TransformFunction":
        """factor * F, e.g. a dose times a transfer function."""
        fn = self.fn
        return TransformFunction(
            lambda s: factor * fn(s), self.abscissa, f"{factor}*{self.label}"
        )


@dataclass(frozen=True)
class InversionConfig:
    """Parameters of both inversion methods.

    term_count None picks the method default. half_period None lets the
    Fourier method use DEHOOG_HALF_PERIOD_FACTOR times the largest time.
    """

    method: InversionMethod = InversionMethod.valsa
    a: float = VALSA_A
    term_count: Optional[int] = None
    sigma0: float = 0.0
    half_period: Optional[float] = None
    half_period_factor: float = DEHOOG_HALF_PERIOD_FACTOR
    tolerance: float = DEHOOG_TOLERANCE

    def __post_init__(self) -> None:
        """Validate the parameters."""
        object.__setattr__(self, "method", InversionMethod(self.method))
        if not self.a > 0:
            raise ConfigError(f"Valsa parameter a must be positive, got {self.a}")
        if self.term_count is not None and self.term_count < 10:
            raise ConfigError(f"term_count must be at least 10, got {self.term_count}")
        if self.half_period is not None and not self.half_period > 0:
            raise ConfigError(f"half period must be positive, got {self.half_period}")
        if not self.half_period_factor > 0.5:
            raise ConfigError("half_period_factor must exceed 0.5 so that t < 2T")
        if not 0 < self.tolerance < 1:
            raise ConfigError(f"tolerance must lie in (0, 1), got {self.tolerance}")

    @property
    def terms(self) -> int:
        """Series length actually used."""
        if self.term_count is not None:
            return self.term_count
        if self.method is InversionMethod.valsa:
            return VALSA_TERM_COUNT
        return DEHOOG_TERM_COUNT

    def to_dict(self) -> dict[str, object]:
        """Serializable form, for run metadata."""
        return {
            "method": self.method.value,
            "a": self.a,
            "term_count": self.terms,
            "sigma0": self.sigma0,
            "half_period": self.half_period,
            "half_period_factor": self.half_period_factor,
            "tolerance": self.tolerance,
        }
