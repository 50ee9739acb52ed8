"""Benchmark command module.

Every method family is scored on the bolus scenario against an inverse
Laplace reference on a common uniform grid. One table per family is written
as `<family>.csv`, the absolute error curves as `errors/<family>/<cell>.csv`.
"""

import logging
import re
import time
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import Any
from typing import Optional

import numpy as np
from rich import print
from rich.progress import Progress
from rich.progress import SpinnerColumn
from rich.progress import TextColumn

from ..config import RunConfig
from ..exceptions import ConfigError
from ..exceptions import FracPKError
from ..invlap.transform import InversionConfig
from ..invlap.transform import InversionMethod
from ..model.params import PKParams
from ..model.params import nominal_params
from ..model.scenario import bolus_scenario
from ..settings import BOLUS_DOSE
from ..settings import COMPARISON_GRID_POINTS
from ..settings import SIMULATION_HORIZON
from ..settings import VALSA_A
from ..settings import WORKERS
from ..solvers.simulate import Method
from ..solvers.simulate import comparison_step
from ..solvers.simulate import invert_scenario
from ..solvers.simulate import parse_method
from ..solvers.simulate import solve_scenario
from ..solvers.trajectory import Trajectory
from ..solvers.trajectory import uniform_grid
from ..util import run_parallel
from ..util import write_csv
from ..util import write_json
from .metrics import TABLE_HEADER
from .metrics import ErrorReport
from .metrics import error_curve


logger = logging.getLogger(__name__)

Cell = tuple[Method, dict[str, Any]]

LTI_METHODS = (Method.pade, Method.oustaloup, Method.matsuda)

DEFAULT_FAMILIES: dict[str, list[Cell]] = {
    "pade": [(Method.pade, {"m": m, "n": m + 1}) for m in (2, 3, 4, 5)],
    "oustaloup": [
        (Method.oustaloup, {"wb": wb, "wh": wh, "N": n})
        for wb, wh, n in ((1e-2, 1e3, 8), (1e-2, 1e4, 20), (1e-3, 1e3, 8), (1e-3, 1e4, 20))
    ],
    "matsuda": [
        (Method.matsuda, {"beta": beta, "k_min": lo, "k_max": hi})
        for beta, lo, hi in ((2.0, -1, 10), (2.0, 1, 10), (2.3, -1, 11), (3.0, 1, 10))
    ],
    "abm": [(Method.abm, {"h": h}) for h in (1e-2, 1e-3, 1e-4, 1e-5)],
    "gl": [
        (Method.gl, {"h": h, "memory": memory})
        for h in (1e-2, 1e-3)
        for memory in (3.0, 5.0, 7.0)
    ],
    "flmm": [
        (Method.flmm, {"h": 1e-2, "p": 2, "q": 5}),
        (Method.abm, {"h": 1e-2, "p": 2, "q": 5}),
        (Method.flmm, {"h": 1e-2, "p": 19, "q": 46}),
    ],
}

SUITE_KEYS = frozenset({"families", "points", "a", "terms", *DEFAULT_FAMILIES})


@dataclass
class BenchmarkSuite:
    """Families of cells plus the reference and grid they are scored on."""

    families: dict[str, list[Cell]] = field(
        default_factory=lambda: {k: list(v) for k, v in DEFAULT_FAMILIES.items()}
    )
    reference: InversionConfig = field(default_factory=InversionConfig)
    params: PKParams = field(default_factory=nominal_params)
    dose: float = BOLUS_DOSE
    horizon: float = SIMULATION_HORIZON
    points: int = COMPARISON_GRID_POINTS
    workers: int = WORKERS

    @property
    def grid_step(self) -> float:
        """Spacing of the comparison grid."""
        return comparison_step(self.horizon, self.points)

    def cell_count(self) -> int:
        """Number of cells over all families."""
        return sum(len(cells) for cells in self.families.values())


@dataclass(frozen=True)
class BenchmarkJob:
    """One cell, with everything a worker process needs."""

    family: str
    method: Method
    options: dict[str, Any]
    params: PKParams
    dose: float
    horizon: float
    reference: Trajectory
    reference_config: dict[str, Any]


@dataclass
class CellResult:
    """Report and error curve of one cell."""

    family: str
    report: ErrorReport
    curve: Optional[Trajectory] = None


def cell_name(method: Method, options: Mapping[str, Any]) -> str:
    """File-system friendly name of a cell, e.g. gl_h=0.01_memory=3.0."""
    parts = [method.value, *(f"{k}={options[k]}" for k in sorted(options))]
    return re.sub(r"[^A-Za-z0-9=.+-]+", "_", "_".join(parts))


def run_cell(job: BenchmarkJob) -> CellResult:
    """Simulate one cell and score it; failures become failure rows."""
    options = dict(job.options)
    if job.method in LTI_METHODS:
        options.setdefault("h", comparison_step(job.horizon, len(job.reference)))
    started = time.perf_counter()
    try:
        candidate = solve_scenario(
            job.method, bolus_scenario(job.dose, job.params), job.horizon, options
        )
        report = ErrorReport.compare(
            candidate, job.reference, job.method.value, job.options, job.reference_config
        )
        curve: Optional[Trajectory] = error_curve(candidate, job.reference)
    except (FracPKError, np.linalg.LinAlgError) as e:
        logger.warning("%s %s failed: %s", job.family, cell_name(job.method, job.options), e)
        report = ErrorReport.failed(
            job.method.value, job.options, f"{type(e).__name__}: {e}"
        )
        curve = None
    report.wall_time = time.perf_counter() - started
    return CellResult(job.family, report, curve)


def reference_trajectory(suite: BenchmarkSuite) -> Trajectory:
    """Inverse Laplace reference on the comparison grid, t = 0 included."""
    grid = uniform_grid(suite.grid_step, suite.horizon)
    return invert_scenario(bolus_scenario(suite.dose, suite.params), grid, suite.reference)


def run_benchmark(suite: BenchmarkSuite) -> list[CellResult]:
    """Score every cell of the suite.

    Args:
        suite: Families, reference and grid.

    Returns:
        One result per cell, families and cells in suite order.
    """
    if suite.cell_count() == 0:
        return []
    reference = reference_trajectory(suite)
    jobs = [
        BenchmarkJob(
            family=family,
            method=method,
            options=dict(options),
            params=suite.params,
            dose=suite.dose,
            horizon=suite.horizon,
            reference=reference,
            reference_config=suite.reference.to_dict(),
        )
        for family, cells in suite.families.items()
        for method, options in cells
    ]
    logger.info("Benchmark of %d cells with %d workers", len(jobs), suite.workers)
    return run_parallel(run_cell, jobs, suite.workers)


def _cells_from_config(family: str, rows: Sequence[Mapping[str, Any]]) -> list[Cell]:
    default_method = DEFAULT_FAMILIES[family][0][0]
    cells: list[Cell] = []
    for row in rows:
        options = dict(row)
        method = parse_method(options.pop("method", default_method))
        cells.append((method, options))
    return cells


def suite_from_config(config: RunConfig) -> BenchmarkSuite:
    """Benchmark suite described by a run configuration.

    config.method names the reference method; config.params may select
    families, replace the rows of a family, and set the grid size and the
    reference parameters a and terms.

    Raises:
        ConfigError: Unknown families or keys.
    """
    unknown = set(config.params) - SUITE_KEYS
    if unknown:
        raise ConfigError(f"unknown benchmark parameters: {', '.join(sorted(unknown))}")
    selected = list(config.params.get("families", DEFAULT_FAMILIES))
    missing = [name for name in selected if name not in DEFAULT_FAMILIES]
    if missing:
        raise ConfigError(f"unknown benchmark families: {', '.join(missing)}")
    families = {
        name: (
            _cells_from_config(name, config.params[name])
            if name in config.params
            else list(DEFAULT_FAMILIES[name])
        )
        for name in selected
    }
    try:
        method = InversionMethod(config.method or InversionMethod.valsa.value)
    except ValueError:
        raise ConfigError(f"unknown reference method {config.method!r}") from None
    terms = config.params.get("terms")
    reference = InversionConfig(
        method=method,
        a=float(config.params.get("a", VALSA_A)),
        term_count=None if terms is None else int(terms),
    )
    points = int(config.params.get("points", COMPARISON_GRID_POINTS))
    if points < 2:
        raise ConfigError(f"comparison grid needs at least 2 points, got {points}")
    return BenchmarkSuite(
        families=families,
        reference=reference,
        params=nominal_params().with_overrides(**config.model),
        dose=config.dose,
        horizon=config.horizon,
        points=points,
        workers=config.workers or WORKERS,
    )


def write_results(
    output_dir: Path, suite: BenchmarkSuite, results: Sequence[CellResult]
) -> None:
    """Per-family tables and error curves."""
    for family in suite.families:
        rows = [r.report.to_row() for r in results if r.family == family]
        write_csv(output_dir / f"{family}.csv", TABLE_HEADER, rows)
    for result in results:
        if result.curve is not None:
            name = cell_name(Method(result.report.method), result.report.params)
            result.curve.to_csv(output_dir / "errors" / result.family / f"{name}.csv")


def benchmark(config: RunConfig) -> Path:
    """Run the benchmark and write its tables.

    Args:
        config: Run configuration.

    Returns:
        The output directory.
    """
    suite = suite_from_config(config)
    output_dir = config.output_dir
    started = time.perf_counter()
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        transient=True,
    ) as progress:
        progress.add_task(
            description=f"Running {suite.cell_count()} benchmark cells... This may take a few minutes",
            total=None,
        )
        results = run_benchmark(suite)
    elapsed = time.perf_counter() - started
    write_results(output_dir, suite, results)
    write_json(
        output_dir / "summary.json",
        {
            "config": config.to_dict(),
            "horizon": suite.horizon,
            "points": suite.points,
            "reference": suite.reference.to_dict(),
            "wall_time": elapsed,
            "cells": {
                family: [r.report.to_dict() for r in results if r.family == family]
                for family in suite.families
            },
        },
    )
    failures = [r for r in results if not r.report.ok]
    for failure in failures:
        print(
            f":warning:\t{failure.family}: {failure.report.method} "
            f"{failure.report.params_label()} failed ({failure.report.message})"
        )
    print(
        f":white_check_mark:\tBenchmarked {len(results)} cells "
        f"({len(failures)} failed), results in {output_dir}"
    )
    return output_dir
