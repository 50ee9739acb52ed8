"""Schedule and population command module."""

import logging
from pathlib import Path
from typing import Any

import numpy as np
from rich import print
from rich.progress import Progress
from rich.progress import SpinnerColumn
from rich.progress import TextColumn

from ..config import RunConfig
from ..exceptions import ConfigError
from ..model.params import PKParams
from ..model.params import nominal_params
from ..model.population import nominal_patient
from ..model.population import sample_population
from ..model.population import write_population_manifest
from ..settings import FIDELITY_THRESHOLD
from ..settings import GL_HISTORY_DAYS
from ..settings import HIFI_STEP
from ..settings import NOMINAL_P
from ..settings import POPULATION_Q
from ..settings import QP_MAX_ITERATIONS
from ..settings import QP_TOLERANCE
from ..settings import WORKERS
from ..solvers.gl import build_gl_realization
from ..solvers.gl import memory_steps
from ..util import write_json
from .admm import solve_qp
from .evaluate import evaluate_schedule
from .evaluate import population_run
from .problem import DosingProblem
from .problem import Schedule
from .qp import build_qp


logger = logging.getLogger(__name__)

PROBLEM_KEYS = frozenset({"t_c", "t_d", "N_d", "nu", "memory", "Q", "x_ref", "x_max", "u_max"})
SOLVER_KEYS = frozenset({"x0", "tolerance", "max_iterations", "hifi_step"})
POPULATION_KEYS = frozenset({"n"})


def problem_from_config(config: RunConfig) -> DosingProblem:
    """Dosing problem from config.params; unset values keep their defaults.

    memory (days) is converted to nu at the control step unless nu is given.
    A scalar x_ref is the tissue set-point; x_max may be a scalar or a pair.
    """
    values: dict[str, Any] = {
        k: config.params[k] for k in PROBLEM_KEYS - {"memory"} if k in config.params
    }
    try:
        if "x_ref" in values and np.ndim(values["x_ref"]) == 0:
            values["x_ref"] = [0.0, float(values["x_ref"])]
        if "Q" in values:
            values["Q"] = np.asarray(values["Q"], dtype=np.float64)
            if values["Q"].shape == (2,):
                values["Q"] = np.diag(values["Q"])
        for name in ("t_c", "t_d", "N_d", "u_max"):
            if name in values:
                values[name] = float(values[name])
        t_c = values.get("t_c", DosingProblem.t_c)
        if "nu" in values:
            values["nu"] = int(values["nu"])
        else:
            values["nu"] = memory_steps(t_c, float(config.params.get("memory", GL_HISTORY_DAYS)))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"malformed dosing problem: {e}") from e
    return DosingProblem(**values)


def solve_schedule(config: RunConfig) -> tuple[Schedule, PKParams]:
    """Build and solve the nominal dosing QP described by config."""
    allowed = PROBLEM_KEYS | SOLVER_KEYS | POPULATION_KEYS
    config.check_params(set(allowed))
    problem = problem_from_config(config)
    params = nominal_params().with_overrides(**config.model)
    realization = build_gl_realization(params, problem.t_c, problem.nu)
    x0 = np.asarray(config.params.get("x0", [0.0, 0.0]), dtype=np.float64)
    if x0.shape != (2,):
        raise ConfigError(f"x0 must hold (A1(0), A2(0)), got {x0.tolist()}")
    qp = build_qp(problem, realization, x0)
    optimal = solve_qp(
        qp,
        tolerance=float(config.params.get("tolerance", QP_TOLERANCE)),
        max_iterations=int(config.params.get("max_iterations", QP_MAX_ITERATIONS)),
    )
    return optimal, params


def _write_schedule(output_dir: Path, schedule: Schedule) -> None:
    schedule.to_csv(output_dir / "schedule.csv")
    write_json(output_dir / "schedule.json", schedule.to_dict())
    schedule.predicted.to_csv(output_dir / "predicted.csv")


def _spinner() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        transient=True,
    )


def schedule(config: RunConfig) -> Path:
    """Compute the nominal schedule and evaluate it on the high-fidelity simulator.

    Writes schedule.csv, schedule.json, predicted.csv, applied.csv,
    discrepancy.csv and metadata.json.

    Args:
        config: Run configuration.

    Returns:
        The output directory.
    """
    output_dir = config.output_dir
    hifi_step = float(config.params.get("hifi_step", HIFI_STEP))
    with _spinner() as progress:
        progress.add_task(description="Solving the dosing QP...", total=None)
        optimal, params = solve_schedule(config)
    _write_schedule(output_dir, optimal)
    print(
        f":white_check_mark:\tSchedule of {len(optimal.doses)} doses, "
        f"objective {optimal.objective:.6g} ({optimal.status})"
    )

    with _spinner() as progress:
        progress.add_task(
            description=f"Applying the schedule with ABM at h={hifi_step}... This may take a few minutes",
            total=None,
        )
        patient = nominal_patient(nominal_numerator(params), POPULATION_Q, base=params)
        evaluation = evaluate_schedule(optimal, patient, hifi_step)
    evaluation.applied.to_csv(output_dir / "applied.csv")
    evaluation.discrepancy.to_csv(output_dir / "discrepancy.csv")
    e1, e2 = (float(v) for v in evaluation.sup_discrepancy)
    write_json(
        output_dir / "metadata.json",
        {
            "config": config.to_dict(),
            "hifi_step": hifi_step,
            "fidelity_threshold": FIDELITY_THRESHOLD,
            "evaluation": evaluation.to_dict(),
            "within_threshold": e2 <= FIDELITY_THRESHOLD,
        },
    )
    marker = ":white_check_mark:" if e2 <= FIDELITY_THRESHOLD else ":warning:"
    print(
        f"{marker}\tGL prediction vs ABM: sup |e1| = {e1:.3e}, sup |e2| = {e2:.3e} ng, "
        f"results in {output_dir}"
    )
    return output_dir


def nominal_numerator(params: PKParams) -> int:
    """p with p/46 closest to the memory order; 19 for the nominal constants."""
    if params.alpha == nominal_params().alpha:
        return NOMINAL_P
    return min(POPULATION_Q - 1, max(1, round(params.memory_order * POPULATION_Q)))


def population(config: RunConfig) -> Path:
    """Apply the nominal schedule to a seeded population.

    Writes the schedule files, population.json, patients/patient-<id>.csv,
    envelope.csv, population_report.json and metadata.json.

    Args:
        config: Run configuration; params.n is the population size.

    Returns:
        The output directory.
    """
    output_dir = config.output_dir
    hifi_step = float(config.params.get("hifi_step", HIFI_STEP))
    n = int(config.params.get("n", 100))
    with _spinner() as progress:
        progress.add_task(description="Solving the dosing QP...", total=None)
        optimal, params = solve_schedule(config)
    _write_schedule(output_dir, optimal)

    patients = sample_population(n, config.seed, base=params)
    write_population_manifest(output_dir / "population.json", patients)
    with _spinner() as progress:
        progress.add_task(
            description=f"Simulating {n} patients... This may take a few minutes",
            total=None,
        )
        report = population_run(optimal, patients, hifi_step, config.workers or WORKERS)

    for evaluation in report.evaluations:
        evaluation.applied.to_csv(
            output_dir / "patients" / f"patient-{evaluation.patient.id:03d}.csv"
        )
    if report.envelope is not None:
        report.envelope.to_csv(output_dir / "envelope.csv")
    write_json(
        output_dir / "population_report.json",
        {
            "patients": [e.to_dict() for e in report.evaluations],
            "failures": report.failures,
        },
    )
    write_json(
        output_dir / "metadata.json",
        {"config": config.to_dict(), "hifi_step": hifi_step, "size": n},
    )
    for failure in report.failures:
        print(f":warning:\tPatient {failure['id']} failed: {failure['error']}")
    print(
        f":white_check_mark:\tSimulated {n - len(report.failures)} of {n} patients, "
        f"results in {output_dir}"
    )
    return output_dir
