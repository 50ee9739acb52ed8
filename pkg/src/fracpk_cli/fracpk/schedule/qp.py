"""Condensed quadratic program of the dosing problem.

The augmented GL model is stepped forward once from the initial state with
no input (free response) and once from rest after a unit dose (dose
response). Since the model is time invariant, the effect of dose j is the
dose response delayed by k_j steps, so every predicted state is affine in
the dose vector:

    x_k = d_k + Gamma_k u,   k = 0..N + 1.

With e_k = d_k - x_ref,k the cost becomes 1/2 u'Pu + q'u + c.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..solvers.gl import GLRealization
from .problem import DosingProblem


logger = logging.getLogger(__name__)

STEP_TOLERANCE = 1e-12


@dataclass(frozen=True)
class QPDescription:
    """minimize 1/2 u'Pu + q'u + c  subject to  G u <= h,  lb <= u <= ub.

    free has shape (N + 2, 2) and response shape (N + 2, 2, n): the
    condensing maps from doses to physical states. dose_map[k, j] is one
    exactly when dose j enters at step k.
    """

    P: npt.NDArray[np.float64]
    q: npt.NDArray[np.float64]
    c: float
    G: npt.NDArray[np.float64]
    h: npt.NDArray[np.float64]
    lb: npt.NDArray[np.float64]
    ub: npt.NDArray[np.float64]
    free: npt.NDArray[np.float64]
    response: npt.NDArray[np.float64]
    dose_map: npt.NDArray[np.float64]
    problem: Optional[DosingProblem] = None
    x0: Optional[npt.NDArray[np.float64]] = None

    @property
    def size(self) -> int:
        """Number of decision variables."""
        return int(self.P.shape[0])

    def objective(self, u: npt.NDArray[np.float64]) -> float:
        """Cost at u, constant included."""
        return float(0.5 * u @ self.P @ u + self.q @ u + self.c)

    def predict(self, u: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        """Physical states x_0..x_{N+1} for doses u."""
        return self.free + self.response @ u


def _propagate(
    realization: GLRealization, state: npt.NDArray[np.float64], steps: int
) -> npt.NDArray[np.float64]:
    """Physical part of x~_0..x~_steps under x~_{k+1} = A^ x~_k."""
    transition = realization.transition_matrix()
    physical = np.empty((steps + 1, 2))
    physical[0] = state[:2]
    for k in range(steps):
        state = transition @ state
        physical[k + 1] = state[:2]
    return physical


def build_qp(
    problem: DosingProblem,
    realization: GLRealization,
    x0: npt.ArrayLike,
) -> QPDescription:
    """Condense the dosing problem over the GL model.

    Args:
        problem: Timing, weights, reference and bounds.
        realization: GL model with step t_c and memory nu.
        x0: Initial amounts (A1, A2).

    Returns:
        The condensed QP.

    Raises:
        ConfigError: The realization does not match the problem's step or memory.
    """
    if abs(realization.h - problem.t_c) > STEP_TOLERANCE * problem.t_c:
        raise ConfigError(
            f"realization step {realization.h} differs from t_c = {problem.t_c}"
        )
    if realization.nu != problem.nu:
        raise ConfigError(
            f"realization memory {realization.nu} differs from nu = {problem.nu}"
        )
    x0 = np.asarray(x0, dtype=np.float64).reshape(2)
    N, n = problem.N, problem.dose_count  # noqa: N806
    last = problem.cost_steps - 1

    free = _propagate(realization, realization.augment(x0), last)
    unit = realization.input_matrix()[:, 0] / problem.t_c
    impulse = np.zeros((last + 1, 2))
    impulse[1:] = _propagate(realization, unit, last - 1)

    response = np.zeros((last + 1, 2, n))
    dose_map = np.zeros((N + 1, n))
    for j, k in enumerate(problem.dose_steps):
        response[k:, :, j] = impulse[: last + 1 - k]
        dose_map[k, j] = 1.0

    Q = problem.Q  # noqa: N806
    offset = free - problem.x_ref
    P = 2.0 * np.einsum("kin,ij,kjm->nm", response, Q, response)  # noqa: N806
    P = 0.5 * (P + P.T)  # noqa: N806
    q = 2.0 * np.einsum("kin,ij,kj->n", response, Q, offset)
    c = float(np.einsum("ki,ij,kj->", offset, Q, offset))

    constrained = response[1 : N + 1].reshape(2 * N, n)
    upper = np.tile(problem.x_max, N) - free[1 : N + 1].reshape(-1)
    lower = free[1 : N + 1].reshape(-1)
    G = np.vstack([constrained, -constrained])  # noqa: N806
    h = np.concatenate([upper, lower])
    logger.info(
        "Condensed QP: %d doses, %d inequality rows, %d cost samples",
        n,
        G.shape[0],
        last + 1,
    )
    return QPDescription(
        P=P,
        q=q,
        c=c,
        G=G,
        h=h,
        lb=np.zeros(n),
        ub=np.full(n, problem.u_max),
        free=free,
        response=response,
        dose_map=dose_map,
        problem=problem,
        x0=x0,
    )
