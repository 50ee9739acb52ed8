"""Open-loop evaluation of a schedule on the high-fidelity simulator."""

import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Optional

import numpy as np
import numpy.typing as npt

from ..exceptions import ConfigError
from ..exceptions import FracPKError
from ..model.population import PatientSample
from ..settings import HIFI_STEP
from ..settings import WORKERS
from ..solvers.abm import abmpc_solve
from ..solvers.commensurate import expand_commensurate
from ..solvers.trajectory import Trajectory
from ..util import run_parallel
from .problem import Schedule


logger = logging.getLogger(__name__)

HIFI_STEP_LIMIT = 1e-4
ENVELOPE_COLUMNS = ("A2_min", "A2_median", "A2_max")


@dataclass
class Evaluation:
    """A schedule applied to one patient.

    applied is the high-fidelity trajectory on the control grid, discrepancy
    its absolute difference from the GL prediction.
    """

    patient: PatientSample
    applied: Trajectory
    discrepancy: Trajectory
    tracking_cost: float
    violations: dict[str, float]

    @property
    def sup_discrepancy(self) -> npt.NDArray[np.float64]:
        """max |e_i| per compartment."""
        return np.max(self.discrepancy.values, axis=0)

    def to_dict(self) -> dict[str, Any]:
        """Serializable summary."""
        e1, e2 = (float(v) for v in self.sup_discrepancy)
        return {
            "patient": self.patient.to_dict(),
            "tracking_cost": self.tracking_cost,
            "sup_discrepancy": {"e1": e1, "e2": e2},
            "violations": self.violations,
        }


def evaluate_schedule(
    schedule: Schedule, patient: PatientSample, hifi_step: float = HIFI_STEP
) -> Evaluation:
    """Apply the doses to the patient's commensurate system solved by ABM.

    Args:
        schedule: Schedule with its GL prediction.
        patient: Patient whose order is p_hat/q.
        hifi_step: ABM step, at most 1e-4.

    Returns:
        Applied trajectory, discrepancy, tracking cost and bound violations.

    Raises:
        ConfigError: hifi_step above 1e-4.
        DivergenceError: The simulator diverged.
    """
    if not 0 < hifi_step <= HIFI_STEP_LIMIT * (1 + 1e-12):
        raise ConfigError(f"high-fidelity step must lie in (0, {HIFI_STEP_LIMIT}], got {hifi_step}")
    problem = schedule.problem
    system = expand_commensurate(patient.params, patient.p_hat, patient.q, schedule.x0)
    horizon = float(problem.grid[-1])
    logger.info(
        "Evaluating schedule on patient %d (order %s) with h=%r",
        patient.id,
        patient.order,
        hifi_step,
    )
    solved = abmpc_solve(
        system, problem.dosing_input(schedule.doses), hifi_step, horizon, "abm-hifi"
    )
    applied = solved.resample(problem.grid)
    error = np.abs(applied.values - schedule.predicted.values)
    discrepancy = Trajectory(problem.grid, error, "discrepancy", None, ("e1", "e2"))
    states = applied.values
    violations = {
        "upper": float(np.max(np.maximum(states[1:-1] - problem.x_max, 0.0), initial=0.0)),
        "lower": float(np.max(np.maximum(-states[1:-1], 0.0), initial=0.0)),
    }
    return Evaluation(
        patient=patient,
        applied=applied,
        discrepancy=discrepancy,
        tracking_cost=problem.tracking_cost(states),
        violations=violations,
    )


@dataclass
class PatientOutcome:
    """Evaluation of one patient, or the error that stopped it."""

    patient: PatientSample
    evaluation: Optional[Evaluation] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        """True when the patient was simulated."""
        return self.evaluation is not None


@dataclass
class PopulationReport:
    """Per-patient outcomes and the A2 envelope over successful patients."""

    outcomes: list[PatientOutcome]
    envelope: Optional[Trajectory] = None
    failures: list[dict[str, Any]] = field(default_factory=list)

    @property
    def evaluations(self) -> list[Evaluation]:
        """Successful evaluations in patient order."""
        return [o.evaluation for o in self.outcomes if o.evaluation is not None]


def _evaluate_patient(job: tuple[Schedule, PatientSample, float]) -> PatientOutcome:
    schedule, patient, hifi_step = job
    try:
        return PatientOutcome(patient, evaluate_schedule(schedule, patient, hifi_step))
    except FracPKError as e:
        logger.warning("Patient %d failed: %s", patient.id, e)
        return PatientOutcome(patient, error=f"{type(e).__name__}: {e}")


def envelope(trajectories: list[Trajectory]) -> Trajectory:
    """Pointwise min, median and max of A2 over trajectories on one grid."""
    if not trajectories:
        raise ConfigError("envelope of an empty population")
    tissue = np.column_stack([t.A2 for t in trajectories])
    values = np.column_stack(
        [np.min(tissue, axis=1), np.median(tissue, axis=1), np.max(tissue, axis=1)]
    )
    return Trajectory(trajectories[0].grid, values, "envelope", None, ENVELOPE_COLUMNS)


def population_run(
    schedule: Schedule,
    population: list[PatientSample],
    hifi_step: float = HIFI_STEP,
    workers: int = WORKERS,
) -> PopulationReport:
    """Apply one schedule to every patient.

    Args:
        schedule: Schedule computed for the nominal patient.
        population: Patients, at least one.
        hifi_step: ABM step.
        workers: Process count.

    Returns:
        Outcomes in patient order and the envelope of the successful ones.

    Raises:
        ConfigError: Empty population.
    """
    if not population:
        raise ConfigError("population must not be empty")
    jobs = [(schedule, patient, hifi_step) for patient in population]
    outcomes = run_parallel(_evaluate_patient, jobs, workers)
    report = PopulationReport(
        outcomes=outcomes,
        failures=[
            {"id": o.patient.id, "error": o.error} for o in outcomes if not o.ok
        ],
    )
    evaluations = report.evaluations
    if evaluations:
        report.envelope = envelope([e.applied for e in evaluations])
    logger.info(
        "Population run: %d patients, %d failed", len(population), len(report.failures)
    )
    return report
