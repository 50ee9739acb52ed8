"""State-space realization and exact zero-order-hold simulation."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.linalg import expm
from scipy.linalg import matrix_balance
from scipy.signal import tf2ss

from ..exceptions import ConfigError
from ..invlap.transform import ComplexArg
from ..solvers.signals import Impulse
from ..solvers.signals import InputSignal
from ..solvers.signals import sample_input
from ..solvers.trajectory import Trajectory
from ..solvers.trajectory import uniform_grid
from .rational import RationalTransferFunction


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateSpaceModel:
    """x' = A x + B u, y = C x + D u."""

    A: npt.NDArray[np.float64]
    B: npt.NDArray[np.float64]
    C: npt.NDArray[np.float64]
    D: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        """Coerce to 2-D arrays and check dimensions."""
        A, B, C, D = (  # noqa: N806
            np.atleast_2d(np.asarray(m, dtype=np.float64))
            for m in (self.A, self.B, self.C, self.D)
        )
        n = A.shape[0]
        if A.shape != (n, n) or B.shape[0] != n or C.shape[1] != n:
            raise ConfigError(
                f"inconsistent state-space dimensions A{A.shape} B{B.shape} C{C.shape}"
            )
        if D.shape != (C.shape[0], B.shape[1]):
            raise ConfigError(f"D has shape {D.shape}, expected {(C.shape[0], B.shape[1])}")
        for name, matrix in zip("ABCD", (A, B, C, D)):
            matrix.setflags(write=False)
            object.__setattr__(self, name, matrix)

    @property
    def order(self) -> int:
        """State dimension."""
        return int(self.A.shape[0])

    def evaluate(self, s: ComplexArg) -> npt.NDArray[np.complex128]:
        """First-input first-output transfer function C (sI - A)^-1 B + D."""
        points = np.atleast_1d(np.asarray(s, dtype=np.complex128))
        identity = np.eye(self.order)
        values = np.array(
            [
                (self.C @ np.linalg.solve(point * identity - self.A, self.B) + self.D)[0, 0]
                for point in points
            ]
        )
        return values.reshape(np.shape(s))

    def discretize(self, h: float) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """Exact zero-order-hold pair (Phi, Gamma) for step h."""
        n, m = self.B.shape
        augmented = np.zeros((n + m, n + m))
        augmented[:n, :n] = self.A
        augmented[:n, n:] = self.B
        exponential = expm(augmented * h)
        return exponential[:n, :n], exponential[:n, n:]


def realize(tf: RationalTransferFunction, balance: bool = True) -> StateSpaceModel:
    """Controllable canonical realization of a proper transfer function.

    Args:
        tf: Proper transfer function.
        balance: Apply a diagonal similarity that balances A; the transfer
            function is unchanged.

    Returns:
        The realization, with state dimension equal to deg Q.

    Raises:
        ConfigError: tf is improper.
    """
    if not tf.is_proper:
        raise ConfigError("only proper transfer functions can be realized")
    A, B, C, D = tf2ss(tf.numerator, tf.denominator)  # noqa: N806
    if balance and A.size:
        A, T = matrix_balance(A, permute=False)  # noqa: N806
        B = B / np.diag(T)[:, np.newaxis]  # noqa: N806
        C = C * np.diag(T)[np.newaxis, :]  # noqa: N806
    return StateSpaceModel(A, B, C, D)


def simulate_lti(
    model: StateSpaceModel,
    u: InputSignal,
    x0: Optional[npt.NDArray[np.float64]],
    h: float,
    T: float,  # noqa: N803
    columns: Optional[tuple[str, ...]] = None,
    method: str = "lti",
) -> Trajectory:
    """Step the zero-order-hold discretization over a uniform grid.

    An impulse of dose D is realized as the initial state x0 + B D.

    Args:
        model: Continuous-time model with one input.
        u: Piecewise-constant rate, an impulse, or None.
        x0: Initial state, zero when None.
        h: Step in days.
        T: Horizon in days.
        columns: Output names, y or y1..yp by default.
        method: Tag stored in the trajectory.

    Returns:
        Output trajectory.

    Raises:
        ConfigError: Bad step or horizon.
        DivergenceError: Non-finite state.
    """
    grid = uniform_grid(h, T)
    state = np.zeros(model.order) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    if isinstance(u, Impulse):
        state = state + model.B[:, 0] * u.dose
    rates = sample_input(u, grid)
    phi, gamma = model.discretize(h)
    states = np.empty((len(grid), model.order))
    states[0] = state
    for k in range(len(grid) - 1):
        state = phi @ state + gamma[:, 0] * rates[k]
        states[k + 1] = state
    outputs = states @ model.C.T + rates[:, np.newaxis] * model.D[:, 0][np.newaxis, :]
    if columns is None:
        p = model.C.shape[0]
        columns = ("y",) if p == 1 else tuple(f"y{i + 1}" for i in range(p))
    logger.debug("LTI simulation of order %d over %d steps", model.order, len(grid) - 1)
    return Trajectory(grid, outputs, method, h, columns)
