"""Dosing problem and schedule types."""

from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any
from typing import Optional

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..settings import CONTROL_SAMPLING_TIME
from ..settings import DOSE_UPPER_BOUND
from ..settings import DOSING_INTERVAL
from ..settings import GL_HISTORY_DAYS
from ..settings import STATE_UPPER_BOUND
from ..settings import TISSUE_REFERENCE
from ..settings import TREATMENT_DURATION
from ..solvers.signals import PiecewiseConstantInput
from ..solvers.trajectory import Trajectory
from ..util import write_csv


RATIO_TOLERANCE = 1e-9


def _whole_ratio(numerator: float, denominator: float, what: str) -> int:
    ratio = numerator / denominator
    whole = int(round(ratio))
    if whole < 1 or abs(ratio - whole) > RATIO_TOLERANCE * max(1.0, ratio):
        raise ConfigError(f"{what} must be a positive integer multiple, got ratio {ratio}")
    return whole


@dataclass(frozen=True)
class DosingProblem:
    """Open-loop dosing problem over N_d days on the control grid k t_c.

    Doses u_j are given at k_j t_c = j t_d for j = 0..N_d/t_d - 1. The cost
    sums (x_ref,k - x_k)' Q (x_ref,k - x_k) over k = 0..N + 1 with
    N = N_d / t_c; 0 <= x_k <= x_max holds for k = 1..N.
    """

    t_c: float = CONTROL_SAMPLING_TIME
    t_d: float = DOSING_INTERVAL
    N_d: float = TREATMENT_DURATION  # noqa: N815
    nu: int = int(round(GL_HISTORY_DAYS / CONTROL_SAMPLING_TIME))
    Q: npt.NDArray[np.float64] = field(  # noqa: N815
        default_factory=lambda: np.diag([0.0, 1.0])
    )
    x_ref: npt.NDArray[np.float64] = field(
        default_factory=lambda: np.array([0.0, TISSUE_REFERENCE])
    )
    x_max: npt.NDArray[np.float64] = field(
        default_factory=lambda: np.full(2, STATE_UPPER_BOUND)
    )
    u_max: float = DOSE_UPPER_BOUND

    def __post_init__(self) -> None:
        """Validate and coerce; a 2-vector x_ref is a constant reference.

        Raises:
            ConfigError: Timing, weights or bounds are inconsistent.
        """
        if not (self.t_c > 0 and self.t_d > 0 and self.N_d > 0):
            raise ConfigError("t_c, t_d and N_d must be positive")
        _whole_ratio(self.t_d, self.t_c, "t_d / t_c")
        _whole_ratio(self.N_d, self.t_d, "N_d / t_d")
        if self.nu < 1:
            raise ConfigError(f"nu must be at least 1, got {self.nu}")
        Q = np.asarray(self.Q, dtype=np.float64)  # noqa: N806
        if Q.shape != (2, 2) or not np.allclose(Q, Q.T):
            raise ConfigError("Q must be a symmetric 2x2 matrix")
        if np.min(np.linalg.eigvalsh(Q)) < -1e-12:
            raise ConfigError("Q must be positive semidefinite")
        x_max = np.broadcast_to(np.asarray(self.x_max, dtype=np.float64), (2,)).copy()
        if np.any(x_max < 0) or not np.all(np.isfinite(x_max)):
            raise ConfigError(f"state bounds must be finite and non-negative, got {x_max}")
        if not (np.isfinite(self.u_max) and self.u_max >= 0):
            raise ConfigError(f"dose bound must be finite and non-negative, got {self.u_max}")
        x_ref = np.asarray(self.x_ref, dtype=np.float64)
        if x_ref.shape == (2,):
            x_ref = np.tile(x_ref, (self.cost_steps, 1))
        if x_ref.shape != (self.cost_steps, 2):
            raise ConfigError(
                f"x_ref must be a 2-vector or have shape {(self.cost_steps, 2)}, got {x_ref.shape}"
            )
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "x_max", x_max)
        object.__setattr__(self, "x_ref", x_ref)
        object.__setattr__(self, "u_max", float(self.u_max))

    @property
    def N(self) -> int:  # noqa: N802
        """Prediction steps N = N_d / t_c."""
        return _whole_ratio(self.N_d, self.t_c, "N_d / t_c")

    @property
    def dose_stride(self) -> int:
        """Control steps between doses."""
        return _whole_ratio(self.t_d, self.t_c, "t_d / t_c")

    @property
    def dose_count(self) -> int:
        """Number of decision variables N_d / t_d."""
        return _whole_ratio(self.N_d, self.t_d, "N_d / t_d")

    @property
    def dose_steps(self) -> npt.NDArray[np.int64]:
        """Control steps k_j at which the doses enter."""
        return self.dose_stride * np.arange(self.dose_count, dtype=np.int64)

    @property
    def dose_times(self) -> npt.NDArray[np.float64]:
        """j t_d in days."""
        return self.t_d * np.arange(self.dose_count, dtype=np.float64)

    @property
    def cost_steps(self) -> int:
        """Samples k = 0..N + 1 entering the cost."""
        return self.N + 2

    @property
    def grid(self) -> npt.NDArray[np.float64]:
        """Times k t_c for k = 0..N + 1."""
        return self.t_c * np.arange(self.cost_steps, dtype=np.float64)

    def dosing_input(self, doses: npt.ArrayLike) -> PiecewiseConstantInput:
        """Rate u_j / t_c over [k_j t_c, (k_j + 1) t_c), zero elsewhere."""
        doses = np.asarray(doses, dtype=np.float64).reshape(-1)
        if doses.shape != (self.dose_count,):
            raise ConfigError(f"expected {self.dose_count} doses, got {doses.shape[0]}")
        rates = np.zeros(self.N + 1)
        rates[self.dose_steps] = doses / self.t_c
        return PiecewiseConstantInput(rates, self.t_c)

    def tracking_cost(self, states: npt.NDArray[np.float64]) -> float:
        """Sum of (x_ref,k - x_k)' Q (x_ref,k - x_k) over the cost samples."""
        error = self.x_ref - states
        return float(np.einsum("ki,ij,kj->", error, self.Q, error))

    def to_dict(self) -> dict[str, Any]:
        """Serializable form; x_ref is reduced to its first row when constant."""
        x_ref: Any = self.x_ref.tolist()
        if np.all(self.x_ref == self.x_ref[0]):
            x_ref = self.x_ref[0].tolist()
        return {
            "t_c": self.t_c,
            "t_d": self.t_d,
            "N_d": self.N_d,
            "nu": self.nu,
            "Q": self.Q.tolist(),
            "x_ref": x_ref,
            "x_max": self.x_max.tolist(),
            "u_max": self.u_max,
        }


@dataclass
class Schedule:
    """Optimal doses with the GL prediction they produce."""

    problem: DosingProblem
    doses: npt.NDArray[np.float64]
    status: str
    objective: float
    predicted: Trajectory
    x0: npt.NDArray[np.float64] = field(default_factory=lambda: np.zeros(2))
    iterations: int = 0
    residuals: dict[str, float] = field(default_factory=dict)
    message: Optional[str] = None

    @property
    def times(self) -> npt.NDArray[np.float64]:
        """Administration times j t_d."""
        return self.problem.dose_times

    def scaled(self, factor: float) -> "Schedule":
        """The same schedule with every dose multiplied by factor."""
        return Schedule(
            problem=self.problem,
            doses=self.doses * factor,
            status=self.status,
            objective=float("nan"),
            predicted=self.predicted.scaled(factor),
            x0=self.x0 * factor,
            iterations=self.iterations,
            residuals={},
        )

    def to_csv(self, path: Path) -> Path:
        """Write `j,t_days,dose_ng` rows."""
        rows = ([j, float(t), float(u)] for j, (t, u) in enumerate(zip(self.times, self.doses)))
        return write_csv(path, ("j", "t_days", "dose_ng"), rows)

    def to_dict(self) -> dict[str, Any]:
        """Serializable summary of the schedule and its solve."""
        return {
            "status": self.status,
            "objective": self.objective,
            "iterations": self.iterations,
            "residuals": self.residuals,
            "doses": self.doses.tolist(),
            "times": self.times.tolist(),
            "x0": self.x0.tolist(),
            "message": self.message,
            "problem": self.problem.to_dict(),
        }
