"""Operator-splitting solver for the condensed dosing QP.

The problem 1/2 u'Pu + q'u s.t. l <= A u <= b, with A = [G; I], is solved by
ADMM with over-relaxation. The matrix P + sigma I + rho A'A is factored once
and refactored only when rho changes by more than a factor of 5. Once the
residuals are below tolerance the active set guessed from the duals is
polished with one KKT solve.
"""

import logging
from dataclasses import dataclass
from dataclasses import field

import numpy as np
import numpy.typing as npt
from scipy.linalg import cho_factor
from scipy.linalg import cho_solve

from ..exceptions import ConfigError
from ..exceptions import ConvergenceError
from ..exceptions import InfeasibleProblemError
from ..settings import QP_MAX_ITERATIONS
from ..settings import QP_TOLERANCE
from ..solvers.trajectory import COMPARTMENTS
from ..solvers.trajectory import Trajectory
from .problem import Schedule
from .qp import QPDescription


logger = logging.getLogger(__name__)

SIGMA = 1e-6
RHO = 0.1
RELAXATION = 1.6
CHECK_INTERVAL = 25
RHO_REFACTOR_RATIO = 5.0
INFEASIBILITY_TOLERANCE = 1e-5


@dataclass
class QPSolution:
    """Primal and dual point with KKT residuals."""

    u: npt.NDArray[np.float64]
    y: npt.NDArray[np.float64]
    status: str
    iterations: int
    residuals: dict[str, float] = field(default_factory=dict)


def _stacked(qp: QPDescription) -> tuple[
    npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.float64]
]:
    A = np.vstack([qp.G, np.eye(qp.size)])  # noqa: N806
    lower = np.concatenate([np.full(len(qp.h), -np.inf), qp.lb])
    upper = np.concatenate([qp.h, qp.ub])
    return A, lower, upper


def kkt_residuals(
    qp: QPDescription, u: npt.NDArray[np.float64], y: npt.NDArray[np.float64]
) -> dict[str, float]:
    """Stationarity, primal and dual feasibility and complementarity, inf-norms.

    y holds one multiplier per row of [G; I]; positive entries act on upper
    bounds and negative ones on lower bounds.
    """
    A, lower, upper = _stacked(qp)  # noqa: N806
    Au = A @ u  # noqa: N806
    y_upper = np.maximum(y, 0.0)
    y_lower = np.maximum(-y, 0.0)
    finite_lower = np.isfinite(lower)
    slack_upper = upper - Au
    slack_lower = np.where(finite_lower, Au - lower, 0.0)
    dual = float(np.max(y_lower[~finite_lower], initial=0.0))
    return {
        "stationarity": float(np.max(np.abs(qp.P @ u + qp.q + A.T @ y), initial=0.0)),
        "primal": float(
            np.max(np.maximum(np.maximum(-slack_upper, -slack_lower), 0.0), initial=0.0)
        ),
        "dual": dual,
        "complementarity": float(
            np.max(
                np.maximum(np.abs(y_upper * slack_upper), np.abs(y_lower * slack_lower)),
                initial=0.0,
            )
        ),
    }


def _primal_infeasible(
    dy: npt.NDArray[np.float64],
    A: npt.NDArray[np.float64],  # noqa: N803
    lower: npt.NDArray[np.float64],
    upper: npt.NDArray[np.float64],
) -> bool:
    norm = np.max(np.abs(dy))
    if norm == 0.0:
        return False
    tolerance = INFEASIBILITY_TOLERANCE * norm
    if np.max(np.abs(A.T @ dy)) > tolerance:
        return False
    lower_part = np.minimum(dy, 0.0)
    if np.any(lower_part[~np.isfinite(lower)] < -tolerance):
        return False
    support = upper @ np.maximum(dy, 0.0) + np.where(
        np.isfinite(lower), lower, 0.0
    ) @ lower_part
    return bool(support < -tolerance)


def _polish(
    qp: QPDescription,
    u: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
    tolerance: float,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], bool]:
    """Solve the KKT system of the active set guessed from y."""
    A, lower, upper = _stacked(qp)  # noqa: N806
    threshold = tolerance * max(1.0, float(np.max(np.abs(y), initial=0.0)))
    active_upper = y > threshold
    active_lower = y < -threshold
    active = active_upper | active_lower
    bounds = np.where(active_upper, upper, lower)[active]
    rows = A[active]
    n, m = qp.size, int(np.sum(active))
    kkt = np.zeros((n + m, n + m))
    kkt[:n, :n] = qp.P
    kkt[:n, n:] = rows.T
    kkt[n:, :n] = rows
    rhs = np.concatenate([-qp.q, bounds])
    solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    polished_u = solution[:n]
    polished_y = np.zeros_like(y)
    polished_y[active] = solution[n:]
    residuals = kkt_residuals(qp, polished_u, polished_y)
    signs_ok = np.all(polished_y[active_upper] >= -tolerance) and np.all(
        polished_y[active_lower] <= tolerance
    )
    accepted = bool(signs_ok) and max(residuals.values()) <= tolerance
    return polished_u, polished_y, accepted


def solve_qp_raw(
    qp: QPDescription,
    tolerance: float = QP_TOLERANCE,
    max_iterations: int = QP_MAX_ITERATIONS,
) -> QPSolution:
    """ADMM on the condensed QP.

    Args:
        qp: Problem data.
        tolerance: Absolute and relative residual tolerance.
        max_iterations: Iteration cap.

    Returns:
        The solution, doses clipped into their box.

    Raises:
        ConfigError: Bad tolerance or inconsistent box.
        InfeasibleProblemError: A certificate of primal infeasibility was found.
        ConvergenceError: The cap was hit; the message carries the residuals.
    """
    if not 0 < tolerance < 1:
        raise ConfigError(f"QP tolerance must lie in (0, 1), got {tolerance}")
    if np.any(qp.lb > qp.ub):
        raise InfeasibleProblemError("dose bounds are empty: lb > ub")
    A, lower, upper = _stacked(qp)  # noqa: N806
    n, m = qp.size, A.shape[0]
    if n == 0:
        empty = np.zeros(0)
        return QPSolution(empty, np.zeros(m), "solved", 0, kkt_residuals(qp, empty, np.zeros(m)))

    rho = RHO
    gram = A.T @ A
    factor = cho_factor(qp.P + SIGMA * np.eye(n) + rho * gram)
    u = np.clip(np.zeros(n), qp.lb, qp.ub)
    z = np.clip(A @ u, lower, upper)
    y = np.zeros(m)
    y_checked = y.copy()

    for iteration in range(1, max_iterations + 1):
        u_tilde = cho_solve(factor, SIGMA * u - qp.q + A.T @ (rho * z - y))
        z_tilde = A @ u_tilde
        u = RELAXATION * u_tilde + (1.0 - RELAXATION) * u
        relaxed = RELAXATION * z_tilde + (1.0 - RELAXATION) * z
        z_next = np.clip(relaxed + y / rho, lower, upper)
        y = y + rho * (relaxed - z_next)
        z = z_next

        if iteration % CHECK_INTERVAL and iteration != max_iterations:
            continue
        Au = A @ u  # noqa: N806
        Pu = qp.P @ u  # noqa: N806
        Aty = A.T @ y  # noqa: N806
        primal_residual = float(np.max(np.abs(Au - z)))
        dual_residual = float(np.max(np.abs(Pu + qp.q + Aty)))
        primal_scale = max(float(np.max(np.abs(Au))), float(np.max(np.abs(z))))
        dual_scale = max(
            float(np.max(np.abs(Pu))), float(np.max(np.abs(Aty))), float(np.max(np.abs(qp.q)))
        )
        if primal_residual <= tolerance * (1.0 + primal_scale) and dual_residual <= tolerance * (
            1.0 + dual_scale
        ):
            break
        if _primal_infeasible(y - y_checked, A, lower, upper):
            raise InfeasibleProblemError(
                f"state bounds cannot be met: infeasibility certificate after {iteration} iterations"
            )
        y_checked = y.copy()
        ratio = (primal_residual / max(primal_scale, 1e-30)) / max(
            dual_residual / max(dual_scale, 1e-30), 1e-30
        )
        new_rho = float(np.clip(rho * np.sqrt(ratio), 1e-6, 1e6))
        if new_rho > RHO_REFACTOR_RATIO * rho or new_rho < rho / RHO_REFACTOR_RATIO:
            logger.debug("ADMM iteration %d: rho %r -> %r", iteration, rho, new_rho)
            rho = new_rho
            factor = cho_factor(qp.P + SIGMA * np.eye(n) + rho * gram)
    else:
        residuals = kkt_residuals(qp, np.clip(u, qp.lb, qp.ub), y)
        raise ConvergenceError(
            f"QP did not converge in {max_iterations} iterations: "
            + ", ".join(f"{k}={v:.3e}" for k, v in residuals.items())
        )

    polished_u, polished_y, accepted = _polish(qp, u, y, tolerance)
    if accepted:
        u, y = polished_u, polished_y
    u = np.clip(u, qp.lb, qp.ub)
    residuals = kkt_residuals(qp, u, y)
    logger.info(
        "ADMM solved in %d iterations, polished=%s, residuals %s",
        iteration,
        accepted,
        residuals,
    )
    return QPSolution(u, y, "solved" if accepted else "solved-inaccurate", iteration, residuals)


def solve_qp(
    qp: QPDescription,
    tolerance: float = QP_TOLERANCE,
    max_iterations: int = QP_MAX_ITERATIONS,
) -> Schedule:
    """Optimal schedule of a condensed dosing QP.

    Args:
        qp: QP built by build_qp.
        tolerance: Residual tolerance.
        max_iterations: Iteration cap.

    Returns:
        Doses, status, objective, KKT residuals and the GL prediction.

    Raises:
        ConfigError: qp has no dosing problem attached.
        InfeasibleProblemError: State bounds cannot be met.
        ConvergenceError: Iteration cap hit.
    """
    if qp.problem is None:
        raise ConfigError("QP carries no dosing problem")
    solution = solve_qp_raw(qp, tolerance, max_iterations)
    predicted = Trajectory(
        qp.problem.grid, qp.predict(solution.u), "gl-prediction", qp.problem.t_c, COMPARTMENTS
    )
    return Schedule(
        problem=qp.problem,
        doses=solution.u,
        status=solution.status,
        objective=qp.objective(solution.u),
        predicted=predicted,
        x0=np.zeros(2) if qp.x0 is None else qp.x0,
        iterations=solution.iterations,
        residuals=solution.residuals,
    )
