"""Trapezoidal fractional linear multistep method (convolution quadrature).

The Volterra form x(t) = x0 + I^gamma f(t) is discretized as

    x_n = x0 + h^g (sum_{j=0..n} w_{n-j} f_j + sum_{k<s} W_{n,k} f_k)

with w_n the coefficients of ((1 + z) / (2 (1 - z)))^g and starting weights
W_{n,k} making the rule exact on t^(v g) for every v with v g <= 1. The first
s - 1 steps share the starting weights and are solved together; after that
each step is one linear solve.
"""

import logging

import numpy as np
import numpy.typing as npt
from scipy.linalg import lu_factor
from scipy.linalg import lu_solve
from scipy.signal import fftconvolve
from scipy.special import gammaln

from ..calculus.weights import binomial_series
from ..exceptions import ConfigError
from ..exceptions import SolverRefusedError
from ..settings import FLMM_MIN_GAMMA
from .commensurate import LinearFDESystem
from .convolution import HistoryConvolution
from .signals import Impulse
from .signals import InputSignal
from .signals import sample_input
from .trajectory import Trajectory
from .trajectory import uniform_grid


logger = logging.getLogger(__name__)


def trapezoidal_weights(gamma: float, count: int) -> npt.NDArray[np.float64]:
    """Coefficients w_0..w_{count-1} of ((1 + z) / (2 (1 - z)))^gamma."""
    last = count - 1
    signs = np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
    numerator = signs * binomial_series(gamma, last)
    denominator = binomial_series(-gamma, last)
    product = fftconvolve(numerator, denominator)[:count]
    return 2.0**-gamma * product


def starting_exponents(gamma: float) -> npt.NDArray[np.float64]:
    """Exponents v gamma <= 1 the quadrature must integrate exactly."""
    count = int(np.floor(1.0 / gamma + 1e-12)) + 1
    return gamma * np.arange(count, dtype=np.float64)


def _powers(nodes: npt.NDArray[np.float64], exponent: float) -> npt.NDArray[np.float64]:
    if exponent == 0.0:
        return np.ones(len(nodes))
    return nodes**exponent


def starting_weights(
    gamma: float, weights: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """Starting weights W[n, k] for n = 0..len(weights)-1 and k < s.

    Args:
        gamma: Order of the integral.
        weights: Convolution weights w_0..w_N.

    Returns:
        Array of shape (N + 1, s); row 0 is zero.
    """
    exponents = starting_exponents(gamma)
    s = len(exponents)
    size = len(weights)
    nodes = np.arange(s, dtype=np.float64)
    vandermonde = np.array([_powers(nodes, mu) for mu in exponents])
    steps = np.arange(size, dtype=np.float64)
    rhs = np.empty((s, size))
    for row, mu in enumerate(exponents):
        exact = np.exp(gammaln(mu + 1.0) - gammaln(mu + 1.0 + gamma)) * steps ** (mu + gamma)
        quadrature = fftconvolve(weights, _powers(steps, mu))[:size]
        rhs[row] = exact - quadrature
    rhs[:, 0] = 0.0
    return np.linalg.solve(vandermonde, rhs).T


def flmm_trapezoidal_solve(
    system: LinearFDESystem,
    u: InputSignal,
    h: float,
    T: float,  # noqa: N803
    method: str = "flmm",
) -> Trajectory:
    """Trapezoidal convolution quadrature on the grid 0, h, ..., T.

    Args:
        system: Linear system with base order gamma >= 0.1.
        u: Rate input; put bolus doses into the initial state.
        h: Step in days.
        T: Horizon in days.
        method: Tag stored in the trajectory.

    Returns:
        The selected output states.

    Raises:
        SolverRefusedError: gamma below 0.1.
        ConfigError: Bad step, horizon or input.
        DivergenceError: Non-finite values.
    """
    gamma = float(system.gamma)
    if gamma < FLMM_MIN_GAMMA:
        raise SolverRefusedError(
            f"flmm refuses base order {system.gamma} (below {FLMM_MIN_GAMMA}): "
            "trapezoidal convolution quadrature gives poor results there and "
            "often does not converge; use abm"
        )
    if isinstance(u, Impulse):
        raise ConfigError("FLMM takes a piecewise-constant rate; put a bolus into x0")
    grid = uniform_grid(h, T)
    size = len(grid)
    d = system.dimension
    rates = sample_input(u, grid)
    M, e, x0 = system.matrix, system.input_map, system.x0  # noqa: N806
    weights = trapezoidal_weights(gamma, size)
    start = starting_weights(gamma, weights)
    s = start.shape[1]
    scale = h**gamma
    logger.info(
        "FLMM solve: %d states, gamma=%s, h=%r, %d steps, %d starting weights",
        d,
        system.gamma,
        h,
        size - 1,
        s,
    )

    states = np.empty((size, d))
    states[0] = x0
    forcing = e[np.newaxis, :] * rates[:, np.newaxis]
    f0 = M @ x0 + forcing[0]
    first = min(s, size)
    if first > 1:
        # x_1..x_{s-1} are coupled through the starting weights
        coefficients = start[1:first, :first].copy()
        for n in range(1, first):
            coefficients[n - 1, : n + 1] += weights[n::-1]
        unknown = first - 1
        block = np.eye(unknown * d) - scale * np.kron(coefficients[:, 1:], M)
        rhs = np.tile(x0, unknown) + scale * (
            np.outer(coefficients[:, 0], f0) + coefficients[:, 1:] @ forcing[1:first]
        ).reshape(-1)
        states[1:first] = np.linalg.solve(block, rhs).reshape(unknown, d)
    start_forces = states[:first] @ M.T + forcing[:first]

    implicit = lu_factor(np.eye(d) - scale * weights[0] * M)

    def step(m: int, sums: list[npt.NDArray[np.float64]]) -> npt.NDArray[np.float64]:
        if m < first:
            return start_forces[m]
        history = sums[0] + start[m] @ start_forces
        rhs = x0 + scale * (history + weights[0] * forcing[m])
        states[m] = lu_solve(implicit, rhs)
        return M @ states[m] + forcing[m]

    HistoryConvolution([weights], size, d).run(f0, step)
    outputs = states[:, list(system.outputs)]
    return Trajectory(grid, outputs, method, h, system.columns)
