"""Truncated Grünwald-Letnikov stepping of the model.

With step h and memory of nu steps the model becomes

    x_{k+1} = (I + h A) x_k + h^alpha F sum_{j<nu} c_j x_{k-j} + h B u_k

where c_j are GL weights of order 1 - alpha and u_k is a rate in ng/day.
Stacking (x_k, ..., x_{k-nu+1}) gives the augmented linear system
x~_{k+1} = A^ x~_k + B^ u_k used by the scheduler.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy import sparse

from ..calculus.weights import GLWeightSequence
from ..calculus.weights import gl_weights
from ..exceptions import ConfigError
from ..model.params import PKParams
from .signals import Impulse
from .signals import InputSignal
from .signals import sample_input
from .trajectory import COMPARTMENTS
from .trajectory import Trajectory
from .trajectory import uniform_grid


logger = logging.getLogger(__name__)


def memory_steps(h: float, memory_days: float) -> int:
    """History length nu in steps for a memory of memory_days."""
    if not (h > 0 and memory_days > 0):
        raise ConfigError(f"step and memory must be positive, got {h} and {memory_days}")
    return max(1, int(round(memory_days / h)))


@dataclass(frozen=True)
class GLRealization:
    """Truncated GL model with step h and memory nu."""

    params: PKParams
    h: float
    nu: int
    weights: GLWeightSequence
    A: npt.NDArray[np.float64]
    F: npt.NDArray[np.float64]
    B: npt.NDArray[np.float64]

    @property
    def dimension(self) -> int:
        """Augmented state size 2 nu."""
        return 2 * self.nu

    @property
    def history_scale(self) -> float:
        """h^alpha, the step factor of the memory term."""
        return float(self.h**self.params.alpha)

    @property
    def coefficients(self) -> npt.NDArray[np.float64]:
        """c_0..c_{nu-1}."""
        return self.weights.weights[: self.nu]

    def propagator(self) -> npt.NDArray[np.float64]:
        """I + h A, the local part of one step."""
        return np.eye(2) + self.h * self.A

    def transition_matrix(self) -> sparse.csr_matrix:
        """A^ over the stacked state, built as a sparse matrix.

        The top block row holds I + h A + h^alpha c_0 F followed by
        h^alpha c_j F; the rows below shift the history by one block.
        """
        top = self.history_scale * np.kron(self.coefficients[np.newaxis, :], self.F)
        top[:, :2] += self.propagator()
        shift = sparse.eye(self.dimension - 2, self.dimension, format="csr")
        return sparse.vstack([sparse.csr_matrix(top), shift], format="csr")

    def input_matrix(self) -> npt.NDArray[np.float64]:
        """B^ = (h B, 0, ..., 0)."""
        b_hat = np.zeros((self.dimension, 1))
        b_hat[:2, 0] = self.h * self.B
        return b_hat

    def augment(self, x0: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Stacked state at t = 0 with a zero history."""
        state = np.zeros(self.dimension)
        state[:2] = np.asarray(x0, dtype=np.float64).reshape(2)
        return state


def build_gl_realization(params: PKParams, h: float, nu: int) -> GLRealization:
    """Matrices of the truncated GL model.

    Args:
        params: Model constants.
        h: Step in days.
        nu: Memory length in steps.

    Returns:
        The realization.

    Raises:
        ConfigError: h <= 0 or nu < 1.
    """
    if not h > 0:
        raise ConfigError(f"GL step must be positive, got {h}")
    if nu < 1:
        raise ConfigError(f"GL memory must be at least one step, got {nu}")
    k10, k12, k21 = params.k10, params.k12, params.k21
    sequence = gl_weights(params.memory_order, max(nu - 1, 1))
    return GLRealization(
        params=params,
        h=h,
        nu=nu,
        weights=sequence,
        A=np.array([[-(k12 + k10), 0.0], [k12, 0.0]]),
        F=np.array([[0.0, k21], [0.0, -k21]]),
        B=np.array([1.0, 0.0]),
    )


class HistoryBuffer:
    """The last nu states, newest first, in a contiguous window.

    Twice the needed storage is kept so the window never wraps: when the
    write position reaches the start, the current window is copied to the
    upper half.
    """

    def __init__(self, nu: int, width: int = 2) -> None:
        """Start from an all-zero history."""
        self.nu = nu
        self.data = np.zeros((2 * nu, width))
        self.position = nu

    def push(self, state: npt.NDArray[np.float64]) -> None:
        """Make state the newest entry."""
        if self.position == 0:
            self.data[self.nu :] = self.data[: self.nu]
            self.position = self.nu
        self.position -= 1
        self.data[self.position] = state

    def window(self) -> npt.NDArray[np.float64]:
        """States x_k, x_{k-1}, ..., x_{k-nu+1}."""
        return self.data[self.position : self.position + self.nu]


def gl_simulate(
    realization: GLRealization,
    u: InputSignal,
    x0: Optional[npt.ArrayLike],
    T: float,  # noqa: N803
    method: str = "gl",
) -> Trajectory:
    """Run the GL recursion over 0, h, ..., T.

    Args:
        realization: Model matrices and weights.
        u: Rate input sampled at the grid; an impulse adds its dose to A1(0).
        x0: (A1(0), A2(0)), zero when None.
        T: Horizon in days.
        method: Tag stored in the trajectory.

    Returns:
        A1, A2 on the grid.

    Raises:
        ConfigError: T < h.
        DivergenceError: Non-finite values.
    """
    h = realization.h
    if T < h:
        raise ConfigError(f"horizon {T} is shorter than the step {h}")
    grid = uniform_grid(h, T)
    state = np.zeros(2) if x0 is None else np.asarray(x0, dtype=np.float64).reshape(2).copy()
    if isinstance(u, Impulse):
        state[0] += u.dose
    rates = sample_input(u, grid)
    propagator = realization.propagator()
    memory = realization.history_scale * realization.F
    coefficients = realization.coefficients
    forcing = h * realization.B
    history = HistoryBuffer(realization.nu)
    values = np.empty((len(grid), 2))
    values[0] = state
    logger.info(
        "GL simulation: h=%r, nu=%d, %d steps", h, realization.nu, len(grid) - 1
    )
    for k in range(len(grid) - 1):
        history.push(state)
        state = (
            propagator @ state
            + memory @ (coefficients @ history.window())
            + forcing * rates[k]
        )
        values[k + 1] = state
    return Trajectory(grid, values, method, h, COMPARTMENTS)
