"""Command-line-interface for fractional pharmacokinetics simulation and dosing."""

import logging
import traceback
import typing as t
from collections.abc import Callable
from pathlib import Path
from typing import Any

import typer
import typer.rich_utils
from rich.console import Console
from typing_extensions import Annotated

from fracpk_cli.fracpk.util import set_debug_logging

from .approx.approx import approx as approx_command
from .bench.benchmark import benchmark as benchmark_command
from .config import RunConfig
from .config import build_run_config
from .exceptions import ExitCode
from .exceptions import FracPKError
from .exceptions import NumericalError
from .schedule.schedule import population as population_command
from .schedule.schedule import schedule as schedule_command
from .solvers.simulate import simulate as simulate_command
from .util import exit_with_error


# Don't print with color, output is often captured into log files
typer.rich_utils.STYLE_OPTION = ""
typer.rich_utils.STYLE_SWITCH = ""
typer.rich_utils.STYLE_NEGATIVE_OPTION = ""
typer.rich_utils.STYLE_NEGATIVE_SWITCH = ""
typer.rich_utils.STYLE_METAVAR = ""
typer.rich_utils.STYLE_METAVAR_SEPARATOR = "dim"
typer.rich_utils.STYLE_USAGE = ""
typer.rich_utils.STYLE_USAGE_COMMAND = "bold"
typer.rich_utils.STYLE_DEPRECATED = ""
typer.rich_utils.STYLE_DEPRECATED_COMMAND = "dim"
typer.rich_utils.STYLE_HELPTEXT_FIRST_LINE = ""
typer.rich_utils.STYLE_HELPTEXT = ""
typer.rich_utils.STYLE_OPTION_HELP = ""
typer.rich_utils.STYLE_OPTION_DEFAULT = "dim"
typer.rich_utils.STYLE_OPTION_ENVVAR = "dim"
typer.rich_utils.STYLE_REQUIRED_SHORT = ""
typer.rich_utils.STYLE_REQUIRED_LONG = ""
typer.rich_utils.STYLE_OPTIONS_PANEL_BORDER = "dim"
console = Console(color_system=None)
print = console.print

logger = logging.getLogger(__name__)

app = typer.Typer(
    help="Simulate a fractional two-compartment drug model, benchmark its numerical methods and compute dosing schedules.",
    rich_markup_mode="rich",
    pretty_exceptions_show_locals=False,
)

ConfigOption = Annotated[
    t.Optional[Path],
    typer.Option("--config", help="TOML or JSON config file. Flags override its values."),
]
OutputOption = Annotated[
    t.Optional[Path],
    typer.Option("--output-dir", help="Directory for the result files."),
]
HorizonOption = Annotated[
    t.Optional[float], typer.Option("--T", "--horizon", help="Simulation horizon in days.")
]
DoseOption = Annotated[t.Optional[float], typer.Option(help="Bolus dose in ng.")]
AlphaOption = Annotated[t.Optional[float], typer.Option(help="Order of the tissue derivative.")]
K10Option = Annotated[t.Optional[float], typer.Option(help="Elimination rate from plasma, 1/day.")]
K12Option = Annotated[t.Optional[float], typer.Option(help="Plasma to tissue rate, 1/day.")]
K21Option = Annotated[t.Optional[float], typer.Option(help="Tissue to plasma rate, 1/day^alpha.")]
WorkersOption = Annotated[
    t.Optional[int],
    typer.Option(help="Worker processes (defaults to FRACPK_WORKERS or the number of physical cores)."),
]


def _model(
    alpha: t.Optional[float],
    k10: t.Optional[float],
    k12: t.Optional[float],
    k21: t.Optional[float],
) -> dict[str, t.Optional[float]]:
    return {"alpha": alpha, "k10": k10, "k12": k12, "k21": k21}


def run_command(
    command: str,
    action: Callable[[RunConfig], Path],
    config_file: t.Optional[Path],
    params: dict[str, Any],
    **overrides: Any,
) -> None:
    """Build the run config and execute the command, mapping errors to exit codes.

    Args:
        command: Command name, echoed into metadata and error logs.
        action: Command implementation.
        config_file: Optional config file.
        params: Method parameters given as flags, None meaning unset.
        **overrides: RunConfig fields given as flags, None meaning unset.
    """
    output_dir = overrides.get("output_dir")
    try:
        config = build_run_config(command, config_file, params, **overrides)
        output_dir = config.output_dir
        action(config)
    except FracPKError as e:
        exit_with_error(e, traceback.format_exc(), command, output_dir)
    except Exception as e:
        logger.exception("Unexpected failure in %s", command)
        error = NumericalError(f"unexpected {type(e).__name__}: {e}")
        exit_with_error(error, traceback.format_exc(), command, output_dir)
    raise typer.Exit(int(ExitCode.ok))


@app.command()
def simulate(
    method: Annotated[
        t.Optional[str],
        typer.Option(
            help="gl, abm, flmm, valsa, fourier-trapezoid, pade, oustaloup or matsuda (defaults to gl)."
        ),
    ] = None,
    h: Annotated[t.Optional[float], typer.Option("--h", help="Step size in days.")] = None,
    nu: Annotated[t.Optional[int], typer.Option(help="GL memory length in steps.")] = None,
    memory: Annotated[t.Optional[float], typer.Option(help="GL memory length in days.")] = None,
    p: Annotated[t.Optional[int], typer.Option("--p", help="Numerator of the commensurate order.")] = None,
    q: Annotated[t.Optional[int], typer.Option("--q", help="Denominator of the commensurate order.")] = None,
    max_denominator: Annotated[
        t.Optional[int], typer.Option(help="Largest q tried when rationalizing the order.")
    ] = None,
    a: Annotated[t.Optional[float], typer.Option("--a", help="Valsa damping parameter.")] = None,
    terms: Annotated[t.Optional[int], typer.Option(help="Number of inversion terms.")] = None,
    m: Annotated[t.Optional[int], typer.Option("--m", help="Pade numerator degree.")] = None,
    n: Annotated[t.Optional[int], typer.Option("--n", help="Pade denominator degree.")] = None,
    s0: Annotated[t.Optional[float], typer.Option(help="Pade expansion point.")] = None,
    wb: Annotated[t.Optional[float], typer.Option(help="Oustaloup lower band edge, rad/day.")] = None,
    wh: Annotated[t.Optional[float], typer.Option(help="Oustaloup upper band edge, rad/day.")] = None,
    filter_order: Annotated[
        t.Optional[int], typer.Option("--N", help="Oustaloup order, 2N+1 poles.")
    ] = None,
    beta: Annotated[t.Optional[float], typer.Option(help="Matsuda node spacing base.")] = None,
    k_min: Annotated[t.Optional[int], typer.Option(help="Matsuda lowest node exponent.")] = None,
    k_max: Annotated[t.Optional[int], typer.Option(help="Matsuda highest node exponent.")] = None,
    dose: DoseOption = None,
    horizon: HorizonOption = None,
    alpha: AlphaOption = None,
    k10: K10Option = None,
    k12: K12Option = None,
    k21: K21Option = None,
    config_file: ConfigOption = None,
    output_dir: OutputOption = None,
) -> None:
    """:chart_with_upwards_trend:  Simulate the response to a bolus dose and write t,A1,A2 to trajectory.csv."""
    run_command(
        "simulate",
        simulate_command,
        config_file,
        {
            "h": h,
            "nu": nu,
            "memory": memory,
            "p": p,
            "q": q,
            "max_denominator": max_denominator,
            "a": a,
            "terms": terms,
            "m": m,
            "n": n,
            "s0": s0,
            "wb": wb,
            "wh": wh,
            "N": filter_order,
            "beta": beta,
            "k_min": k_min,
            "k_max": k_max,
        },
        method=method,
        dose=dose,
        horizon=horizon,
        model=_model(alpha, k10, k12, k21),
        output_dir=output_dir,
    )


@app.command()
def approx(
    method: Annotated[
        t.Optional[str], typer.Option(help="pade, oustaloup or matsuda.")
    ] = None,
    m: Annotated[t.Optional[int], typer.Option("--m", help="Pade numerator degree.")] = None,
    n: Annotated[t.Optional[int], typer.Option("--n", help="Pade denominator degree.")] = None,
    s0: Annotated[t.Optional[float], typer.Option(help="Pade expansion point.")] = None,
    wb: Annotated[t.Optional[float], typer.Option(help="Oustaloup lower band edge, rad/day.")] = None,
    wh: Annotated[t.Optional[float], typer.Option(help="Oustaloup upper band edge, rad/day.")] = None,
    filter_order: Annotated[
        t.Optional[int], typer.Option("--N", help="Oustaloup order, 2N+1 poles.")
    ] = None,
    beta: Annotated[t.Optional[float], typer.Option(help="Matsuda node spacing base.")] = None,
    k_min: Annotated[t.Optional[int], typer.Option(help="Matsuda lowest node exponent.")] = None,
    k_max: Annotated[t.Optional[int], typer.Option(help="Matsuda highest node exponent.")] = None,
    alpha: AlphaOption = None,
    k10: K10Option = None,
    k12: K12Option = None,
    k21: K21Option = None,
    config_file: ConfigOption = None,
    output_dir: OutputOption = None,
) -> None:
    """:triangular_ruler:  Emit the rational approximation of s^alpha and the resulting G1 and G2."""
    run_command(
        "approx",
        approx_command,
        config_file,
        {
            "m": m,
            "n": n,
            "s0": s0,
            "wb": wb,
            "wh": wh,
            "N": filter_order,
            "beta": beta,
            "k_min": k_min,
            "k_max": k_max,
        },
        method=method,
        model=_model(alpha, k10, k12, k21),
        output_dir=output_dir,
    )


@app.command()
def benchmark(
    reference: Annotated[
        t.Optional[str],
        typer.Option(help="Reference inversion: valsa or fourier-trapezoid (defaults to valsa)."),
    ] = None,
    families: Annotated[
        t.Optional[list[str]],
        typer.Option(
            "--family", help="Method family to run, repeatable (defaults to all)."
        ),
    ] = None,
    points: Annotated[
        t.Optional[int], typer.Option(help="Points of the comparison grid.")
    ] = None,
    a: Annotated[t.Optional[float], typer.Option("--a", help="Valsa damping parameter.")] = None,
    terms: Annotated[t.Optional[int], typer.Option(help="Number of inversion terms.")] = None,
    dose: DoseOption = None,
    horizon: HorizonOption = None,
    workers: WorkersOption = None,
    alpha: AlphaOption = None,
    k10: K10Option = None,
    k12: K12Option = None,
    k21: K21Option = None,
    config_file: ConfigOption = None,
    output_dir: OutputOption = None,
) -> None:
    """:bar_chart:  Score every method family against the inverse Laplace reference, one table per family.

    The abm row with h=1e-5 keeps the whole right-hand-side history of the
    92-state commensurate system and needs over 1 GB of memory. Pick families
    with --family, or list abm steps in a config file, on smaller machines.
    """
    run_command(
        "benchmark",
        benchmark_command,
        config_file,
        {"families": families or None, "points": points, "a": a, "terms": terms},
        method=reference,
        dose=dose,
        horizon=horizon,
        workers=workers,
        model=_model(alpha, k10, k12, k21),
        output_dir=output_dir,
    )


def _dosing_params(
    nu: t.Optional[int],
    memory: t.Optional[float],
    t_c: t.Optional[float],
    t_d: t.Optional[float],
    duration: t.Optional[float],
    x_ref: t.Optional[float],
    x_max: t.Optional[float],
    u_max: t.Optional[float],
    tolerance: t.Optional[float],
    max_iterations: t.Optional[int],
    hifi_step: t.Optional[float],
) -> dict[str, Any]:
    return {
        "nu": nu,
        "memory": memory,
        "t_c": t_c,
        "t_d": t_d,
        "N_d": duration,
        "x_ref": x_ref,
        "x_max": x_max,
        "u_max": u_max,
        "tolerance": tolerance,
        "max_iterations": max_iterations,
        "hifi_step": hifi_step,
    }


NuOption = Annotated[t.Optional[int], typer.Option(help="GL memory length in control steps.")]
MemoryOption = Annotated[t.Optional[float], typer.Option(help="GL memory length in days.")]
SamplingOption = Annotated[
    t.Optional[float], typer.Option("--t-c", help="Control sampling time in days.")
]
IntervalOption = Annotated[
    t.Optional[float], typer.Option("--t-d", help="Dosing interval in days.")
]
DurationOption = Annotated[
    t.Optional[float], typer.Option("--duration", help="Treatment duration in days.")
]
ReferenceOption = Annotated[
    t.Optional[float], typer.Option("--x-ref", help="Tissue set-point in ng.")
]
UpperOption = Annotated[
    t.Optional[float], typer.Option("--x-max", help="Upper bound on both compartments in ng.")
]
DoseBoundOption = Annotated[
    t.Optional[float], typer.Option("--u-max", help="Largest single dose in ng.")
]
ToleranceOption = Annotated[t.Optional[float], typer.Option(help="QP residual tolerance.")]
IterationsOption = Annotated[t.Optional[int], typer.Option(help="QP iteration cap.")]
HifiOption = Annotated[
    t.Optional[float], typer.Option("--hifi-step", help="ABM step of the evaluation, at most 1e-4.")
]


@app.command()
def schedule(
    nu: NuOption = None,
    memory: MemoryOption = None,
    t_c: SamplingOption = None,
    t_d: IntervalOption = None,
    duration: DurationOption = None,
    x_ref: ReferenceOption = None,
    x_max: UpperOption = None,
    u_max: DoseBoundOption = None,
    tolerance: ToleranceOption = None,
    max_iterations: IterationsOption = None,
    hifi_step: HifiOption = None,
    alpha: AlphaOption = None,
    k10: K10Option = None,
    k12: K12Option = None,
    k21: K21Option = None,
    config_file: ConfigOption = None,
    output_dir: OutputOption = None,
) -> None:
    """:pill:  Compute the optimal dosing schedule and check it against the high-fidelity simulator."""
    run_command(
        "schedule",
        schedule_command,
        config_file,
        _dosing_params(
            nu, memory, t_c, t_d, duration, x_ref, x_max, u_max, tolerance, max_iterations, hifi_step
        ),
        model=_model(alpha, k10, k12, k21),
        output_dir=output_dir,
    )


@app.command()
def population(
    size: Annotated[
        t.Optional[int], typer.Option("--n", help="Number of patients (defaults to 100).")
    ] = None,
    seed: Annotated[t.Optional[int], typer.Option(help="Seed of the population sample.")] = None,
    workers: WorkersOption = None,
    nu: NuOption = None,
    memory: MemoryOption = None,
    t_c: SamplingOption = None,
    t_d: IntervalOption = None,
    duration: DurationOption = None,
    x_ref: ReferenceOption = None,
    x_max: UpperOption = None,
    u_max: DoseBoundOption = None,
    tolerance: ToleranceOption = None,
    max_iterations: IterationsOption = None,
    hifi_step: HifiOption = None,
    alpha: AlphaOption = None,
    k10: K10Option = None,
    k12: K12Option = None,
    k21: K21Option = None,
    config_file: ConfigOption = None,
    output_dir: OutputOption = None,
) -> None:
    """:busts_in_silhouette:  Apply the nominal schedule to a sampled patient population."""
    params = _dosing_params(
        nu, memory, t_c, t_d, duration, x_ref, x_max, u_max, tolerance, max_iterations, hifi_step
    )
    params["n"] = size
    run_command(
        "population",
        population_command,
        config_file,
        params,
        seed=seed,
        workers=workers,
        model=_model(alpha, k10, k12, k21),
        output_dir=output_dir,
    )


def main() -> None:
    """Main function of fracpk_cli."""
    set_debug_logging()
    app(prog_name="fracpk")  # pragma: no cover


if __name__ == "__main__":
    main()  # pragma: no cover
