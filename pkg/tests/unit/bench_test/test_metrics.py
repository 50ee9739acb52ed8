"""Tests for the error indices."""

import numpy as np
import pytest

from fracpk_cli.fracpk.bench.metrics import TABLE_HEADER
from fracpk_cli.fracpk.bench.metrics import ErrorReport
from fracpk_cli.fracpk.bench.metrics import error_curve
from fracpk_cli.fracpk.bench.metrics import l2_error
from fracpk_cli.fracpk.bench.metrics import sup_error
from fracpk_cli.fracpk.exceptions import ConfigError
from fracpk_cli.fracpk.solvers.trajectory import Trajectory
from fracpk_cli.fracpk.solvers.trajectory import uniform_grid


def make_trajectory(values: np.ndarray, h: float = 0.01, method: str = "x") -> Trajectory:
    grid = h * np.arange(len(values), dtype=float)
    return Trajectory(grid, values, method, h, ("A1", "A2"))


@pytest.fixture
def reference() -> Trajectory:
    grid = uniform_grid(0.01, 2.0)
    return make_trajectory(np.column_stack([np.exp(-grid), 1 - np.exp(-grid)]))


def test_identical_trajectories(reference: Trajectory) -> None:
    np.testing.assert_array_equal(l2_error(reference, reference), [0.0, 0.0])
    np.testing.assert_array_equal(sup_error(reference, reference), [0.0, 0.0])


def test_constant_offset(reference: Trajectory) -> None:
    shifted = make_trajectory(reference.values + [0.25, -0.5])
    np.testing.assert_allclose(l2_error(shifted, reference), [0.25 * 2**0.5, 0.5 * 2**0.5])
    np.testing.assert_allclose(sup_error(shifted, reference), [0.25, 0.5])
    np.testing.assert_allclose(l2_error(reference, shifted), l2_error(shifted, reference))


def test_sup_picks_the_largest_deviation(reference: Trajectory) -> None:
    values = reference.values.copy()
    values[37, 1] += 3e-3
    values[80, 1] -= 7e-3
    np.testing.assert_allclose(sup_error(make_trajectory(values), reference), [0.0, 7e-3])


def test_finer_candidate_is_interpolated(reference: Trajectory) -> None:
    grid = uniform_grid(0.001, 2.0)
    fine = make_trajectory(np.column_stack([2 - grid, grid]), h=0.001)
    coarse = make_trajectory(np.column_stack([2 - reference.grid, reference.grid]))
    np.testing.assert_allclose(sup_error(fine, coarse), [0.0, 0.0], atol=1e-12)


def test_candidate_must_cover_reference(reference: Trajectory) -> None:
    short = make_trajectory(reference.values[:100])
    with pytest.raises(ConfigError):
        sup_error(short, reference)


def test_error_curve(reference: Trajectory) -> None:
    curve = error_curve(make_trajectory(reference.values + 0.1, method="gl"), reference)
    assert curve.columns == ("e1", "e2")
    assert curve.method == "gl-error"
    np.testing.assert_allclose(curve.values, 0.1)


def test_report_rows(reference: Trajectory) -> None:
    report = ErrorReport.compare(
        make_trajectory(reference.values + 0.1), reference, "gl", {"memory": 5.0, "h": 0.01}
    )
    assert report.ok
    assert report.params_label() == "h=0.01;memory=5.0"
    row = report.to_row()
    assert len(row) == len(TABLE_HEADER)
    assert row[:2] == ["gl", "h=0.01;memory=5.0"]
    assert row[4:6] == pytest.approx([0.1, 0.1])
    assert row[-1] == "ok"
    assert report.points == 201
    assert report.horizon == pytest.approx(2.0)


def test_failed_report() -> None:
    report = ErrorReport.failed("flmm", {"p": 19, "q": 46}, "SolverRefusedError: no")
    assert not report.ok
    assert report.to_row() == ["flmm", "p=19;q=46", "", "", "", "", "failed"]
    assert report.to_dict()["l2"] is None


def test_triangle_inequality(reference: Trajectory) -> None:
    rng = np.random.default_rng(3)
    first, second = (
        make_trajectory(reference.values + rng.normal(scale=1e-3, size=reference.values.shape))
        for _ in range(2)
    )
    for metric in (l2_error, sup_error):
        direct = metric(first, reference)
        detour = metric(first, second) + metric(second, reference)
        assert np.all(direct <= detour + 1e-15)
