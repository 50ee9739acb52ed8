"""Tests for the condensed dosing QP and its solver."""

import itertools

import numpy as np
import pytest
from scipy.optimize import minimize

from fracpk_cli.fracpk.exceptions import ConfigError
from fracpk_cli.fracpk.exceptions import ConvergenceError
from fracpk_cli.fracpk.exceptions import InfeasibleProblemError
from fracpk_cli.fracpk.model.params import nominal_params
from fracpk_cli.fracpk.schedule.admm import kkt_residuals
from fracpk_cli.fracpk.schedule.admm import solve_qp
from fracpk_cli.fracpk.schedule.admm import solve_qp_raw
from fracpk_cli.fracpk.schedule.problem import DosingProblem
from fracpk_cli.fracpk.schedule.qp import QPDescription
from fracpk_cli.fracpk.schedule.qp import build_qp
from fracpk_cli.fracpk.solvers.gl import build_gl_realization
from fracpk_cli.fracpk.solvers.gl import gl_simulate


def small_problem(**overrides: object) -> DosingProblem:
    values: dict[str, object] = {"t_c": 0.1, "t_d": 0.5, "N_d": 2.0, "nu": 20}
    values.update(overrides)
    return DosingProblem(**values)  # type: ignore[arg-type]


def condensed(problem: DosingProblem, x0: object = (0.0, 0.0)) -> QPDescription:
    realization = build_gl_realization(nominal_params(), problem.t_c, problem.nu)
    return build_qp(problem, realization, x0)  # type: ignore[arg-type]


def test_qp_dimensions() -> None:
    qp = condensed(small_problem())
    assert qp.size == 4
    assert qp.G.shape == (80, 4)
    assert qp.h.shape == (80,)
    assert qp.free.shape == (22, 2)
    assert qp.response.shape == (22, 2, 4)
    np.testing.assert_array_equal(qp.lb, 0.0)
    np.testing.assert_array_equal(qp.ub, 0.5)
    np.testing.assert_array_equal(np.nonzero(qp.dose_map)[0], [0, 5, 10, 15])
    assert np.all(qp.dose_map.sum(axis=1)[[1, 2, 3, 4, 6, 19, 20]] == 0.0)


def test_hessian_is_positive_semidefinite() -> None:
    qp = condensed(small_problem())
    np.testing.assert_allclose(qp.P, qp.P.T)
    assert np.min(np.linalg.eigvalsh(qp.P)) > -1e-12


def test_prediction_matches_gl_simulation() -> None:
    problem = small_problem()
    x0 = np.array([0.05, 0.02])
    qp = condensed(problem, x0)
    doses = np.array([0.1, 0.0, 0.3, 0.2])
    realization = build_gl_realization(nominal_params(), problem.t_c, problem.nu)
    simulated = gl_simulate(realization, problem.dosing_input(doses), x0, problem.grid[-1])
    np.testing.assert_allclose(qp.predict(doses), simulated.values, rtol=1e-9, atol=1e-12)
    cost = problem.tracking_cost(simulated.values)
    assert qp.objective(doses) == pytest.approx(cost, rel=1e-9)


def test_mismatched_realization() -> None:
    problem = small_problem()
    with pytest.raises(ConfigError):
        build_qp(problem, build_gl_realization(nominal_params(), 0.05, 20), [0.0, 0.0])
    with pytest.raises(ConfigError):
        build_qp(problem, build_gl_realization(nominal_params(), 0.1, 10), [0.0, 0.0])


def test_zero_dose_bound_gives_zero_schedule() -> None:
    schedule = solve_qp(condensed(small_problem(u_max=0.0)))
    np.testing.assert_allclose(schedule.doses, 0.0)
    np.testing.assert_allclose(schedule.predicted.values, 0.0)


def test_matches_general_purpose_solver() -> None:
    problem = small_problem(u_max=0.2)
    qp = condensed(problem)
    reference = minimize(
        qp.objective,
        np.full(qp.size, 0.1),
        jac=lambda u: qp.P @ u + qp.q,
        bounds=[(0.0, 0.2)] * qp.size,
        constraints=[{"type": "ineq", "fun": lambda u: qp.h - qp.G @ u, "jac": lambda u: -qp.G}],
        method="SLSQP",
        options={"ftol": 1e-12, "maxiter": 500},
    )
    schedule = solve_qp(qp)
    np.testing.assert_allclose(schedule.doses, reference.x, atol=1e-4)
    assert schedule.objective <= reference.fun + 1e-6


def test_bounds_hold() -> None:
    problem = small_problem(u_max=0.1)
    schedule = solve_qp(condensed(problem))
    assert np.all(schedule.doses >= 0.0)
    assert np.all(schedule.doses <= 0.1)
    assert np.all(schedule.predicted.values[1:-1] <= problem.x_max + 1e-6)
    assert np.all(schedule.predicted.values[1:-1] >= -1e-6)


def test_objective_decreases_with_dose_bound() -> None:
    tight = solve_qp(condensed(small_problem(u_max=0.01)))
    loose = solve_qp(condensed(small_problem(u_max=0.5)))
    assert loose.objective <= tight.objective + 1e-9


def test_unreachable_state_bound() -> None:
    qp = condensed(small_problem(), x0=(0.0, 1.0))
    with pytest.raises((InfeasibleProblemError, ConvergenceError)):
        solve_qp_raw(qp, max_iterations=5000)


def test_empty_dose_box() -> None:
    qp = condensed(small_problem())
    broken = QPDescription(
        P=qp.P, q=qp.q, c=qp.c, G=qp.G, h=qp.h, lb=qp.ub + 1.0, ub=qp.ub,
        free=qp.free, response=qp.response, dose_map=qp.dose_map,
    )
    with pytest.raises(InfeasibleProblemError):
        solve_qp_raw(broken)


def test_bad_tolerance() -> None:
    with pytest.raises(ConfigError):
        solve_qp_raw(condensed(small_problem()), tolerance=0.0)


def test_kkt_residuals_at_interior_optimum() -> None:
    qp = condensed(small_problem(x_max=100.0, u_max=100.0))
    u = np.full(qp.size, 1e-3)
    y = np.zeros(qp.G.shape[0] + qp.size)
    residuals = kkt_residuals(qp, u, y)
    assert residuals["primal"] == 0.0
    assert residuals["complementarity"] == 0.0
    assert residuals["stationarity"] == pytest.approx(np.max(np.abs(qp.P @ u + qp.q)))


def random_qp(rng: np.random.Generator, n: int = 3, rows: int = 2) -> QPDescription:
    factor = rng.normal(size=(n, n))
    G = rng.normal(size=(rows, n))  # noqa: N806
    return QPDescription(
        P=factor @ factor.T + 0.1 * np.eye(n),
        q=rng.normal(size=n),
        c=0.0,
        G=G,
        h=G @ rng.uniform(0.0, 1.0, n) + rng.uniform(0.0, 0.5, rows),
        lb=np.zeros(n),
        ub=np.ones(n),
        free=np.zeros((1, 2)),
        response=np.zeros((1, 2, n)),
        dose_map=np.zeros((1, n)),
    )


def enumerate_active_sets(qp: QPDescription) -> float:
    """Smallest objective over the feasible stationary points of every active set."""
    n = qp.size
    best = np.inf
    for bounds in itertools.product((None, "lb", "ub"), repeat=n):
        for rows in itertools.product((False, True), repeat=len(qp.h)):
            equalities = [np.eye(n)[i] for i, b in enumerate(bounds) if b is not None]
            targets = [qp.lb[i] if b == "lb" else qp.ub[i] for i, b in enumerate(bounds) if b]
            equalities += [qp.G[j] for j, active in enumerate(rows) if active]
            targets += [qp.h[j] for j, active in enumerate(rows) if active]
            m = len(targets)
            kkt = np.zeros((n + m, n + m))
            kkt[:n, :n] = qp.P
            if m:
                A = np.array(equalities)  # noqa: N806
                kkt[:n, n:] = A.T
                kkt[n:, :n] = A
            rhs = np.concatenate([-qp.q, targets])
            u = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:n]
            feasible = (
                np.all(u >= qp.lb - 1e-10)
                and np.all(u <= qp.ub + 1e-10)
                and np.all(qp.G @ u <= qp.h + 1e-10)
            )
            if feasible:
                best = min(best, qp.objective(u))
    return best


def test_matches_active_set_enumeration() -> None:
    rng = np.random.default_rng(20240611)
    for _ in range(50):
        qp = random_qp(rng)
        solution = solve_qp_raw(qp, tolerance=1e-9)
        assert np.all(solution.u >= qp.lb) and np.all(solution.u <= qp.ub)
        assert np.all(qp.G @ solution.u <= qp.h + 1e-7)
        best = enumerate_active_sets(qp)
        assert qp.objective(solution.u) == pytest.approx(best, abs=1e-8 * (1.0 + abs(best)))
