"""Trajectory, the exchange format between solvers and metrics."""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..exceptions import DivergenceError
from ..util import write_csv


COMPARTMENTS = ("A1", "A2")
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Trajectory:
    """Sampled amounts on a strictly increasing time grid (days, ng).

    values has one row per grid point and one column per name in columns.
    """

    grid: npt.NDArray[np.float64]
    values: npt.NDArray[np.float64]
    method: str
    h: Optional[float] = None
    columns: tuple[str, ...] = COMPARTMENTS

    def __post_init__(self) -> None:
        """Coerce to float arrays and check the invariants.

        Raises:
            ConfigError: Shapes disagree or the grid is not increasing.
            DivergenceError: Some value is not finite.
        """
        grid = np.asarray(self.grid, dtype=np.float64).reshape(-1)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.shape != (len(grid), len(self.columns)):
            raise ConfigError(
                f"trajectory values have shape {values.shape}, expected "
                f"{(len(grid), len(self.columns))}"
            )
        if len(grid) > 1 and np.any(np.diff(grid) <= 0):
            raise ConfigError("trajectory grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            bad = int(np.argmax(~np.all(np.isfinite(values), axis=1)))
            raise DivergenceError(
                f"{self.method} produced non-finite values at t={float(grid[bad])!r}"
            )
        if self.h is not None and len(grid) > 1:
            if np.max(np.abs(np.diff(grid) - self.h)) > GRID_TOLERANCE * max(1.0, self.h):
                raise ConfigError(f"trajectory grid is not uniform with step {self.h}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        """Number of grid points."""
        return len(self.grid)

    def column(self, name: str) -> npt.NDArray[np.float64]:
        """Values of one named column."""
        try:
            return self.values[:, self.columns.index(name)]
        except ValueError:
            raise ConfigError(f"trajectory has no column {name}") from None

    @property
    def A1(self) -> npt.NDArray[np.float64]:  # noqa: N802
        """Plasma amounts."""
        return self.column("A1")

    @property
    def A2(self) -> npt.NDArray[np.float64]:  # noqa: N802
        """Tissue amounts."""
        return self.column("A2")

    def scaled(self, factor: float) -> "Trajectory":
        """Same trajectory with every value multiplied by factor."""
        return Trajectory(self.grid, self.values * factor, self.method, self.h, self.columns)

    def resample(self, grid: npt.NDArray[np.float64]) -> "Trajectory":
        """Linear interpolation onto another grid inside the covered range.

        Raises:
            ConfigError: The target grid leaves the covered range.
        """
        grid = np.asarray(grid, dtype=np.float64)
        if len(grid) == 0:
            return Trajectory(grid, np.empty((0, len(self.columns))), self.method, None, self.columns)
        slack = GRID_TOLERANCE * max(1.0, float(np.max(np.abs(grid))))
        if grid[0] < self.grid[0] - slack or grid[-1] > self.grid[-1] + slack:
            raise ConfigError(
                f"cannot resample {self.method} on [{self.grid[0]}, {self.grid[-1]}] "
                f"to [{grid[0]}, {grid[-1]}]"
            )
        values = np.column_stack(
            [np.interp(grid, self.grid, self.values[:, i]) for i in range(len(self.columns))]
        )
        return Trajectory(grid, values, self.method, None, self.columns)

    def to_csv(self, path: Path) -> Path:
        """Write `t,<columns>` rows in full double precision."""
        rows = (
            [float(t), *(float(v) for v in row)]
            for t, row in zip(self.grid, self.values)
        )
        return write_csv(path, ("t", *self.columns), rows)


def uniform_grid(h: float, horizon: float) -> npt.NDArray[np.float64]:
    """Grid 0, h, 2h, ... up to the last multiple of h not past horizon.

    Raises:
        ConfigError: h <= 0 or horizon < h.
    """
    if h <= 0:
        raise ConfigError(f"step must be positive, got {h}")
    if horizon < h:
        raise ConfigError(f"horizon {horizon} is shorter than the step {h}")
    steps = int(np.floor(horizon / h + 1e-9))
    return h * np.arange(steps + 1, dtype=np.float64)
