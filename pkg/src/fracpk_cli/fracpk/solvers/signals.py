"""Input signals: piecewise-constant rates and impulses."""

from dataclasses import dataclass
from typing import Union

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError


SWITCH_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PiecewiseConstantInput:
    """Rate values[i] (ng/day) on [start + i step, start + (i + 1) step), zero elsewhere.

    Times within a small tolerance below a switching instant count as past it,
    so grid points computed as n * h land on the intended interval.
    """

    values: npt.NDArray[np.float64]
    step: float
    start: float = 0.0

    def __post_init__(self) -> None:
        """Validate and coerce values."""
        if not self.step > 0:
            raise ConfigError(f"input step must be positive, got {self.step}")
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ConfigError("input values must be finite")
        object.__setattr__(self, "values", values)

    def __call__(self, t: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Sample the rate at times t."""
        t = np.asarray(t, dtype=np.float64)
        if len(self.values) == 0:
            return np.zeros(t.shape)
        index = np.floor((t - self.start) / self.step + SWITCH_TOLERANCE).astype(np.int64)
        inside = (index >= 0) & (index < len(self.values))
        return np.where(inside, self.values[np.clip(index, 0, len(self.values) - 1)], 0.0)

    def scaled(self, factor: float) -> "PiecewiseConstantInput":
        """Same input with every rate multiplied by factor."""
        return PiecewiseConstantInput(self.values * factor, self.step, self.start)


@dataclass(frozen=True)
class Impulse:
    """An i.v. bolus of dose ng at t = 0."""

    dose: float

    def __post_init__(self) -> None:
        """Reject negative doses."""
        if self.dose < 0:
            raise ConfigError(f"dose must be non-negative, got {self.dose}")


InputSignal = Union[PiecewiseConstantInput, Impulse, None]


def zero_input() -> PiecewiseConstantInput:
    """No input at all."""
    return PiecewiseConstantInput(np.zeros(0), 1.0)


def sample_input(u: InputSignal, grid: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Rate on a grid; impulses and None contribute no rate."""
    if isinstance(u, PiecewiseConstantInput):
        return u(grid)
    return np.zeros(len(grid))
