"""Batch inversion onto a time grid."""

import logging
from collections.abc import Sequence
from typing import Union

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..solvers.trajectory import COMPARTMENTS
from ..solvers.trajectory import Trajectory
from .dehoog import fourier_trapezoid_invert_many
from .transform import InversionConfig
from .transform import InversionMethod
from .transform import TransformFunction
from .valsa import valsa_invert_many


logger = logging.getLogger(__name__)


def invert_many(
    F: TransformFunction,  # noqa: N803
    times: npt.NDArray[np.float64],
    config: InversionConfig,
) -> npt.NDArray[np.float64]:
    """Dispatch to the configured method."""
    if config.method is InversionMethod.valsa:
        return valsa_invert_many(F, times, config)
    return fourier_trapezoid_invert_many(F, times, config)


def invert_on_grid(
    transforms: Union[TransformFunction, Sequence[TransformFunction]],
    grid: npt.NDArray[np.float64],
    config: InversionConfig,
) -> Trajectory:
    """Invert one or more transforms on a positive increasing grid.

    Valsa nodes scale with t, so that method costs O(grid * terms) F
    evaluations. Every time point is computed independently of the others.

    Args:
        transforms: One transform, or one per output column (e.g. G1, G2).
        grid: Positive, strictly increasing times.
        config: Inversion settings.

    Returns:
        Trajectory with one column per transform.

    Raises:
        ConfigError: Grid not positive or not increasing.
    """
    if isinstance(transforms, TransformFunction):
        items, columns = [transforms], ("f",)
    else:
        items = list(transforms)
        columns = (
            COMPARTMENTS
            if len(items) == len(COMPARTMENTS)
            else tuple(f"f{i + 1}" for i in range(len(items)))
        )
    grid = np.asarray(grid, dtype=np.float64).reshape(-1)
    if len(grid) and (grid[0] <= 0 or np.any(np.diff(grid) <= 0)):
        raise ConfigError("inversion grid must be positive and strictly increasing")
    logger.info(
        "Inverting %d transform(s) on %d points with %s",
        len(items),
        len(grid),
        config.method.value,
    )
    if len(grid) == 0:
        values = np.empty((0, len(items)))
    else:
        values = np.column_stack([invert_many(F, grid, config) for F in items])
    return Trajectory(grid, values, config.method.value, None, columns)
