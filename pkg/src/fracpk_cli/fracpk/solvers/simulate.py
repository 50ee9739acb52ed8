"""Simulate command module."""

import logging
import time
from collections.abc import Mapping
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from rich import print

from ..approx.matsuda import geometric_points
from ..approx.matsuda import matsuda_fujii
from ..approx.oustaloup import oustaloup
from ..approx.pade import pade_s_alpha
from ..approx.rational import RationalTransferFunction
from ..approx.statespace import realize
from ..approx.statespace import simulate_lti
from ..approx.substitute import substitute_into_pk
from ..calculus.orders import FractionalOrder
from ..calculus.orders import rationalize_order
from ..config import RunConfig
from ..exceptions import ConfigError
from ..invlap.grid import invert_on_grid
from ..invlap.transform import InversionConfig
from ..invlap.transform import InversionMethod
from ..model.params import PKParams
from ..model.params import nominal_params
from ..model.scenario import BolusScenario
from ..model.scenario import bolus_scenario
from ..settings import COMPARISON_GRID_POINTS
from ..settings import DEHOOG_HALF_PERIOD_FACTOR
from ..settings import DEHOOG_TOLERANCE
from ..settings import GL_HISTORY_DAYS
from ..settings import PADE_EXPANSION_POINT
from ..settings import RATIONALIZE_MAX_DENOMINATOR
from ..settings import VALSA_A
from ..util import write_json
from .abm import abmpc_solve
from .commensurate import expand_commensurate
from .flmm import flmm_trapezoidal_solve
from .gl import build_gl_realization
from .gl import gl_simulate
from .gl import memory_steps
from .signals import Impulse
from .trajectory import COMPARTMENTS
from .trajectory import Trajectory
from .trajectory import uniform_grid


logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-3


class Method(str, Enum):
    """Class with every method that can simulate the bolus scenario."""

    gl = "gl"
    abm = "abm"
    flmm = "flmm"
    valsa = "valsa"
    fourier_trapezoid = "fourier-trapezoid"
    pade = "pade"
    oustaloup = "oustaloup"
    matsuda = "matsuda"


def parse_method(value: str) -> Method:
    """Method by name.

    Raises:
        ConfigError: No such method.
    """
    try:
        return Method(value)
    except ValueError:
        names = ", ".join(m.value for m in Method)
        raise ConfigError(f"unknown method {value!r}, expected one of {names}") from None


COMMENSURATE_PARAMS = frozenset({"h", "p", "q", "max_denominator"})

METHOD_PARAMS: dict[Method, frozenset[str]] = {
    Method.gl: frozenset({"h", "nu", "memory"}),
    Method.abm: COMMENSURATE_PARAMS,
    Method.flmm: COMMENSURATE_PARAMS,
    Method.valsa: frozenset({"h", "a", "terms"}),
    Method.fourier_trapezoid: frozenset({"h", "terms", "tolerance", "half_period_factor"}),
    Method.pade: frozenset({"h", "m", "n", "s0"}),
    Method.oustaloup: frozenset({"h", "wb", "wh", "N"}),
    Method.matsuda: frozenset({"h", "beta", "k_min", "k_max"}),
}


def comparison_step(horizon: float, points: int = COMPARISON_GRID_POINTS) -> float:
    """Step of the uniform comparison grid with points samples on [0, horizon]."""
    return horizon / (points - 1)


def commensurate_order(params: PKParams, options: Mapping[str, Any]) -> tuple[int, int]:
    """Rational memory order p/q, given explicitly or by continued fractions."""
    if "p" in options or "q" in options:
        if not ("p" in options and "q" in options):
            raise ConfigError("p and q must be given together")
        return int(options["p"]), int(options["q"])
    max_denominator = int(options.get("max_denominator", RATIONALIZE_MAX_DENOMINATOR))
    return rationalize_order(params.memory_order, max_denominator)


def s_alpha_approximant(
    method: Method, alpha: float, options: Mapping[str, Any]
) -> RationalTransferFunction:
    """Rational approximant of s^alpha for the pade, oustaloup and matsuda methods.

    Raises:
        ConfigError: method is not a rational approximation.
    """
    if method is Method.pade:
        return pade_s_alpha(
            alpha,
            s0=float(options.get("s0", PADE_EXPANSION_POINT)),
            m=int(options.get("m", 4)),
            n=int(options.get("n", 5)),
        )
    if method is Method.oustaloup:
        return oustaloup(
            alpha,
            float(options.get("wb", 1e-2)),
            float(options.get("wh", 1e3)),
            int(options.get("N", 8)),
        )
    if method is Method.matsuda:
        points = geometric_points(
            float(options.get("beta", 2.0)),
            int(options.get("k_min", -1)),
            int(options.get("k_max", 10)),
        )
        return matsuda_fujii(lambda s: np.power(s, alpha), points)
    raise ConfigError(f"{method.value} is not a rational approximation")


def invert_scenario(
    scenario: BolusScenario,
    grid: npt.NDArray[np.float64],
    config: InversionConfig,
) -> Trajectory:
    """Inverse Laplace of dose * (G1, G2) on a grid starting at t = 0.

    The value at t = 0 is taken from the initial amounts.
    """
    positive = grid[grid > 0]
    inverted = invert_on_grid(scenario.transforms(), positive, config)
    values = inverted.values
    if len(positive) < len(grid):
        values = np.vstack([scenario.initial_amounts, values])
    return Trajectory(grid, values, config.method.value, None, COMPARTMENTS)


def solve_scenario(
    method: Method,
    scenario: BolusScenario,
    horizon: float,
    options: Mapping[str, Any],
) -> Trajectory:
    """Simulate a bolus scenario with one method.

    Args:
        method: Simulation method.
        scenario: Dose and model constants.
        horizon: Simulation horizon in days.
        options: Method parameters; missing ones take their defaults.

    Returns:
        A1, A2 on the method's own grid.

    Raises:
        ConfigError: Unknown parameters or invalid values.
        NumericalError: The method failed.
    """
    method = parse_method(method)
    unknown = set(options) - METHOD_PARAMS[method]
    if unknown:
        raise ConfigError(
            f"unknown parameters for {method.value}: {', '.join(sorted(unknown))}"
        )
    params = scenario.params
    default_step = (
        comparison_step(horizon)
        if method in (Method.valsa, Method.fourier_trapezoid)
        else DEFAULT_STEP
    )
    h = float(options.get("h", default_step))

    if method is Method.gl:
        if "nu" in options:
            nu = int(options["nu"])
        else:
            nu = memory_steps(h, float(options.get("memory", GL_HISTORY_DAYS)))
        realization = build_gl_realization(params, h, nu)
        return gl_simulate(realization, None, scenario.initial_amounts, horizon)

    if method in (Method.abm, Method.flmm):
        p, q = commensurate_order(params, options)
        system = expand_commensurate(params, p, q, scenario.initial_amounts)
        solve = abmpc_solve if method is Method.abm else flmm_trapezoidal_solve
        return solve(system, None, h, horizon, method.value)

    if method in (Method.valsa, Method.fourier_trapezoid):
        terms = options.get("terms")
        config = InversionConfig(
            method=InversionMethod(method.value),
            a=float(options.get("a", VALSA_A)),
            term_count=None if terms is None else int(terms),
            tolerance=float(options.get("tolerance", DEHOOG_TOLERANCE)),
            half_period_factor=float(
                options.get("half_period_factor", DEHOOG_HALF_PERIOD_FACTOR)
            ),
        )
        return invert_scenario(scenario, uniform_grid(h, horizon), config)

    approximant = s_alpha_approximant(method, params.alpha, options)
    columns = []
    for g in substitute_into_pk(approximant, params):
        response = simulate_lti(realize(g), Impulse(scenario.dose), None, h, horizon)
        columns.append(response.values[:, 0])
    grid = uniform_grid(h, horizon)
    return Trajectory(grid, np.column_stack(columns), method.value, h, COMPARTMENTS)


def simulate(config: RunConfig) -> Path:
    """Simulate the bolus scenario and write trajectory.csv and metadata.json.

    Args:
        config: Run configuration; method, params, model, dose and horizon are used.

    Returns:
        The output directory.
    """
    method = parse_method(config.method or Method.gl.value)
    params = nominal_params().with_overrides(**config.model)
    scenario = bolus_scenario(config.dose, params)
    started = time.perf_counter()
    trajectory = solve_scenario(method, scenario, config.horizon, config.params)
    elapsed = time.perf_counter() - started
    logger.info("simulate %s finished in %.3f s", method.value, elapsed)

    output_dir = config.output_dir
    trajectory.to_csv(output_dir / "trajectory.csv")
    metadata: dict[str, Any] = {
        "config": config.to_dict(),
        "method": method.value,
        "params": params.to_dict(),
        "points": len(trajectory),
        "h": trajectory.h,
    }
    if method in (Method.abm, Method.flmm):
        p, q = commensurate_order(params, config.params)
        order = FractionalOrder(params.memory_order, p, q)
        metadata["order"] = {"p": p, "q": q, "error": order.error}
    write_json(output_dir / "metadata.json", metadata)
    print(
        f":white_check_mark:\tSimulated {method.value} over {config.horizon} days, "
        f"results in {output_dir}"
    )
    return output_dir
