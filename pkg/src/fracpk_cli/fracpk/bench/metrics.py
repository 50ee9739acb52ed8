"""Error indices between a candidate trajectory and a reference."""

from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.integrate import trapezoid

from ..exceptions import ConfigError
from ..solvers.trajectory import GRID_TOLERANCE
from ..solvers.trajectory import Trajectory


def align(candidate: Trajectory, reference: Trajectory) -> Trajectory:
    """Candidate on the reference grid, interpolated linearly when the grids differ.

    Raises:
        ConfigError: Columns differ or the candidate does not cover the reference grid.
    """
    if candidate.columns != reference.columns:
        raise ConfigError(
            f"cannot compare columns {candidate.columns} with {reference.columns}"
        )
    if len(candidate) == len(reference) and np.allclose(
        candidate.grid, reference.grid, rtol=0.0, atol=GRID_TOLERANCE
    ):
        return candidate
    return candidate.resample(reference.grid)


def pointwise_error(candidate: Trajectory, reference: Trajectory) -> npt.NDArray[np.float64]:
    """|candidate - reference| on the reference grid, one column per compartment."""
    return np.abs(align(candidate, reference).values - reference.values)


def l2_error(candidate: Trajectory, reference: Trajectory) -> npt.NDArray[np.float64]:
    """sqrt of the integral of e_i^2 over the grid, trapezoid rule."""
    if len(reference) < 2:
        return np.zeros(len(reference.columns))
    error = pointwise_error(candidate, reference)
    return np.sqrt(trapezoid(error**2, reference.grid, axis=0))


def sup_error(candidate: Trajectory, reference: Trajectory) -> npt.NDArray[np.float64]:
    """max |e_i| over the grid."""
    if len(reference) == 0:
        return np.zeros(len(reference.columns))
    return np.max(pointwise_error(candidate, reference), axis=0)


def error_curve(candidate: Trajectory, reference: Trajectory) -> Trajectory:
    """Absolute errors over time with columns e1, e2, ..."""
    error = pointwise_error(candidate, reference)
    columns = tuple(f"e{i + 1}" for i in range(error.shape[1]))
    return Trajectory(reference.grid, error, f"{candidate.method}-error", None, columns)


@dataclass
class ErrorReport:
    """Error indices of one method and parameter set.

    status is "ok" or "failed"; a failed report has no errors and a message.
    """

    method: str
    params: dict[str, Any]
    l2: Optional[tuple[float, ...]] = None
    sup: Optional[tuple[float, ...]] = None
    status: str = "ok"
    message: str = ""
    horizon: float = 0.0
    points: int = 0
    reference: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @classmethod
    def compare(
        cls,
        candidate: Trajectory,
        reference: Trajectory,
        method: str,
        params: dict[str, Any],
        reference_config: Optional[dict[str, Any]] = None,
    ) -> "ErrorReport":
        """Report of candidate against reference."""
        return cls(
            method=method,
            params=params,
            l2=tuple(float(v) for v in l2_error(candidate, reference)),
            sup=tuple(float(v) for v in sup_error(candidate, reference)),
            horizon=float(reference.grid[-1]) if len(reference) else 0.0,
            points=len(reference),
            reference=reference_config or {},
        )

    @classmethod
    def failed(cls, method: str, params: dict[str, Any], message: str) -> "ErrorReport":
        """Explicit failure row."""
        return cls(method=method, params=params, status="failed", message=message)

    @property
    def ok(self) -> bool:
        """True when the method produced a trajectory."""
        return self.status == "ok"

    def params_label(self) -> str:
        """key=value pairs joined by semicolons, keys sorted."""
        return ";".join(f"{k}={self.params[k]}" for k in sorted(self.params))

    def to_row(self) -> list[Any]:
        """method,params,e1_l2,e2_l2,e1_sup,e2_sup,status."""
        if self.l2 is None or self.sup is None:
            errors: list[Any] = ["", "", "", ""]
        else:
            errors = [*self.l2[:2], *self.sup[:2]]
        return [self.method, self.params_label(), *errors, self.status]

    def to_dict(self) -> dict[str, Any]:
        """Serializable form for the summary."""
        return {
            "method": self.method,
            "params": self.params,
            "l2": list(self.l2) if self.l2 is not None else None,
            "sup": list(self.sup) if self.sup is not None else None,
            "status": self.status,
            "message": self.message,
            "horizon": self.horizon,
            "points": self.points,
            "reference": self.reference,
            "wall_time": self.wall_time,
        }


TABLE_HEADER = ("method", "params", "e1_l2", "e2_l2", "e1_sup", "e2_sup", "status")
