"""Adams-Bashforth-Moulton predictor-corrector for linear FDE systems.

Product-rectangle predictor and product-trapezoid corrector on a uniform
grid, for D^gamma x = M x + e u(t) with 0 < gamma < 1:

    x^P_{m} = x0 + h^g / G(g+1) sum_{j<m} b_{m-j} f_j
    x_{m}   = x0 + h^g / G(g+2) (f(t_m, x^P_m) + sum_{j<m} a_{j,m} f_j)

The history sums run through HistoryConvolution. Weights are formed from
differences of powers evaluated with expm1/log1p so long histories keep
their accuracy.
"""

import logging

import numpy as np
import numpy.typing as npt

from ..calculus.special import gamma_fn
from ..exceptions import ConfigError
from .commensurate import LinearFDESystem
from .convolution import HistoryConvolution
from .signals import Impulse
from .signals import InputSignal
from .signals import sample_input
from .trajectory import Trajectory
from .trajectory import uniform_grid


logger = logging.getLogger(__name__)


def power_differences(beta: float, count: int) -> npt.NDArray[np.float64]:
    """(l + 1)^beta - l^beta for l = 0..count-1."""
    lags = np.arange(count, dtype=np.float64)
    differences = np.ones(count)
    positive = lags > 0
    lag = lags[positive]
    differences[positive] = lag**beta * np.expm1(beta * np.log1p(1.0 / lag))
    return differences


def predictor_weights(gamma: float, count: int) -> npt.NDArray[np.float64]:
    """b_l = l^gamma - (l - 1)^gamma for l >= 1; b_0 = 0."""
    weights = np.zeros(count)
    weights[1:] = power_differences(gamma, count - 1)
    return weights


def corrector_weights(gamma: float, count: int) -> npt.NDArray[np.float64]:
    """a_l = (l + 1)^(g+1) - 2 l^(g+1) + (l - 1)^(g+1) for l >= 1; a_0 = 0."""
    differences = power_differences(gamma + 1.0, count)
    weights = np.zeros(count)
    weights[1:] = np.diff(differences)
    return weights


def first_weight_corrections(gamma: float, count: int) -> npt.NDArray[np.float64]:
    """a_{0,m} - a_m, the correction of the weight of f_0 at step m.

    a_{0,m} = (m-1)^(g+1) - (m-1-g) m^g is rewritten as g m^g - n E(n) with
    n = m - 1 and E(n) = (n + 1)^g - n^g.
    """
    corrections = np.zeros(count)
    if count < 2:
        return corrections
    m = np.arange(1, count, dtype=np.float64)
    steps = power_differences(gamma, count - 1)
    first = gamma * m**gamma - (m - 1.0) * steps
    corrections[1:] = first - corrector_weights(gamma, count)[1:]
    return corrections


def abmpc_solve(
    system: LinearFDESystem,
    u: InputSignal,
    h: float,
    T: float,  # noqa: N803
    method: str = "abm",
) -> Trajectory:
    """Predictor-corrector solution on the grid 0, h, ..., T.

    Args:
        system: Linear system with base order gamma in (0, 1).
        u: Rate input sampled on the grid; impulses are not accepted here,
            put bolus doses into the initial state.
        h: Step in days.
        T: Horizon in days.
        method: Tag stored in the trajectory.

    Returns:
        The selected output states.

    Raises:
        ConfigError: Bad step, horizon or input.
        DivergenceError: Non-finite values.
    """
    grid = uniform_grid(h, T)
    if isinstance(u, Impulse):
        raise ConfigError("ABM takes a piecewise-constant rate; put a bolus into x0")
    gamma = float(system.gamma)
    size = len(grid)
    rates = sample_input(u, grid)
    M, e, x0 = system.matrix, system.input_map, system.x0  # noqa: N806
    predictor_scale = h**gamma / gamma_fn(gamma + 1.0)
    corrector_scale = h**gamma / gamma_fn(gamma + 2.0)
    corrections = first_weight_corrections(gamma, size)
    outputs = np.empty((size, len(system.outputs)))
    selected = list(system.outputs)
    outputs[0] = x0[selected]
    f0 = M @ x0 + e * rates[0]

    def step(m: int, sums: list[npt.NDArray[np.float64]]) -> npt.NDArray[np.float64]:
        predictor_sum, corrector_sum = sums
        predicted = x0 + predictor_scale * predictor_sum
        forcing = e * rates[m]
        corrected = x0 + corrector_scale * (
            M @ predicted + forcing + corrector_sum + corrections[m] * f0
        )
        outputs[m] = corrected[selected]
        return M @ corrected + forcing

    logger.info(
        "ABM solve: %d states, gamma=%s, h=%r, %d steps",
        system.dimension,
        system.gamma,
        h,
        size - 1,
    )
    convolution = HistoryConvolution(
        [predictor_weights(gamma, size), corrector_weights(gamma, size)],
        size,
        system.dimension,
    )
    convolution.run(f0, step)
    return Trajectory(grid, outputs, method, h, system.columns)
