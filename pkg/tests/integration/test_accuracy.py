"""Accuracy trends of the benchmark families over the five-day bolus scenario."""

import numpy as np
import pytest

from fracpk_cli.fracpk.bench.benchmark import DEFAULT_FAMILIES
from fracpk_cli.fracpk.bench.benchmark import BenchmarkSuite
from fracpk_cli.fracpk.bench.benchmark import run_benchmark


def family_errors(family: str) -> tuple[np.ndarray, np.ndarray]:
    """l2 errors of every default cell of a family, one row per cell, (A1, A2)."""
    suite = BenchmarkSuite(families={family: DEFAULT_FAMILIES[family]}, workers=1)
    results = run_benchmark(suite)
    assert all(result.report.status == "ok" for result in results)
    l2 = np.array([result.report.l2 for result in results])
    sup = np.array([result.report.sup for result in results])
    return l2, sup


def test_oustaloup_trend() -> None:
    l2, _ = family_errors("oustaloup")
    # rows: (wb, wh, N) = (1e-2, 1e3, 8), (1e-2, 1e4, 20), (1e-3, 1e3, 8), (1e-3, 1e4, 20)
    assert np.all(l2[:, 0] < [2.3e-3, 5.744e-4, 3.3e-3, 7.451e-4])
    # the lower band edge sets the error, the upper one hardly matters
    assert np.all(5.0 * l2[2:, 0] < l2[:2, 0])
    assert np.all(5.0 * l2[2:, 1] < l2[:2, 1])
    assert l2[1, 0] <= l2[0, 0] * (1 + 1e-2)
    assert l2[3, 0] < l2[2, 0]


def test_matsuda_trend() -> None:
    l2, _ = family_errors("matsuda")
    # rows: (beta, k_min, k_max) = (2, -1, 10), (2, 1, 10), (2.3, -1, 11), (3, 1, 10)
    expected = np.array([7.01e-5, 1.6e-3, 2e-4, 3.4e-3])
    assert np.all(l2[:, 0] < 10.0 * expected)
    assert np.all(l2[:, 0] > expected / 10.0)
    assert l2[0, 0] < l2[2, 0] < l2[1, 0] < l2[3, 0]


def test_gl_history_length_against_step() -> None:
    l2, _ = family_errors("gl")
    # rows: h = 1e-2 then 1e-3, memory 3, 5 and 7 days each
    coarse, fine = l2[:3], l2[3:]
    # a five day horizon is covered by five days of history already
    np.testing.assert_allclose(coarse[1], coarse[2], rtol=1e-2)
    np.testing.assert_allclose(fine[1], fine[2], rtol=1e-2)
    np.testing.assert_allclose(coarse[2], [5.126e-4, 3.640e-4], rtol=2e-2)
    np.testing.assert_allclose(fine[2], [5.060e-5, 3.594e-5], rtol=2e-2)
    assert np.all(fine[2] < coarse[0])
    # tissue error: a longer history gains more than a smaller step
    assert coarse[0, 1] - coarse[2, 1] > coarse[0, 1] - fine[0, 1]
    # plasma error: the smaller step gains more
    assert coarse[0, 0] - fine[0, 0] > coarse[0, 0] - coarse[2, 0]


@pytest.mark.parametrize("family, count", [("pade", 4), ("abm", 2)])
def test_errors_shrink_along_family(family: str, count: int) -> None:
    suite = BenchmarkSuite(families={family: DEFAULT_FAMILIES[family][:count]}, workers=1)
    l2 = np.array([result.report.l2 for result in run_benchmark(suite)])
    assert np.all(np.diff(l2[:, 0]) < 0)
    assert np.all(np.diff(l2[:, 1]) < 0)
