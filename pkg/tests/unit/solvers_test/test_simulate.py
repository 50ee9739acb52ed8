"""Tests for the simulate command module."""

import json
from pathlib import Path
from unittest.mock import Mock
from unittest.mock import patch

import numpy as np
import pytest

from fracpk_cli.fracpk.approx.rational import RationalTransferFunction
from fracpk_cli.fracpk.config import RunConfig
from fracpk_cli.fracpk.exceptions import ConfigError
from fracpk_cli.fracpk.model.params import nominal_params
from fracpk_cli.fracpk.model.scenario import bolus_scenario
from fracpk_cli.fracpk.solvers.simulate import Method
from fracpk_cli.fracpk.solvers.simulate import commensurate_order
from fracpk_cli.fracpk.solvers.simulate import comparison_step
from fracpk_cli.fracpk.solvers.simulate import parse_method
from fracpk_cli.fracpk.solvers.simulate import s_alpha_approximant
from fracpk_cli.fracpk.solvers.simulate import simulate
from fracpk_cli.fracpk.solvers.simulate import solve_scenario


SIMULATE = "fracpk_cli.fracpk.solvers.simulate"


def test_parse_method() -> None:
    assert parse_method("fourier-trapezoid") is Method.fourier_trapezoid
    assert parse_method("gl") is Method.gl
    with pytest.raises(ConfigError, match="expected one of"):
        parse_method("euler")


def test_comparison_step() -> None:
    assert comparison_step(7.0, 501) == pytest.approx(0.014)


def test_commensurate_order() -> None:
    params = nominal_params()
    assert commensurate_order(params, {}) == (19, 46)
    assert commensurate_order(params, {"max_denominator": 600}) == (216, 523)
    assert commensurate_order(params, {"p": 2, "q": 5}) == (2, 5)
    with pytest.raises(ConfigError, match="together"):
        commensurate_order(params, {"p": 2})


@pytest.mark.parametrize(
    "method, options",
    [
        (Method.pade, {"m": 2, "n": 3}),
        (Method.oustaloup, {"N": 4}),
        (Method.matsuda, {"k_min": 0, "k_max": 4}),
    ],
)
def test_s_alpha_approximant(method: Method, options: dict[str, float]) -> None:
    approximant = s_alpha_approximant(method, 0.5, options)
    assert isinstance(approximant, RationalTransferFunction)
    assert abs(approximant(1.0)) == pytest.approx(1.0, rel=0.1)


def test_s_alpha_approximant_rejects_solvers() -> None:
    with pytest.raises(ConfigError):
        s_alpha_approximant(Method.gl, 0.5, {})


@pytest.mark.parametrize("method", ["gl", "abm", "flmm", "pade"])
def test_zero_dose_gives_zero_trajectory(method: str) -> None:
    params = nominal_params().with_overrides(alpha=0.6)
    options = {"h": 1e-2, "p": 2, "q": 5} if method in ("abm", "flmm") else {"h": 1e-2}
    trajectory = solve_scenario(Method(method), bolus_scenario(0.0, params), 0.5, options)
    assert trajectory.columns == ("A1", "A2")
    assert np.all(trajectory.values == 0.0)


def test_unknown_option() -> None:
    scenario = bolus_scenario(0.1, nominal_params())
    with pytest.raises(ConfigError, match="unknown parameters for gl: terms"):
        solve_scenario(Method.gl, scenario, 1.0, {"terms": 10})


def test_abm_agrees_with_laplace_inversion() -> None:
    params = nominal_params().with_overrides(alpha=0.6)
    scenario = bolus_scenario(0.1, params)
    abm = solve_scenario(Method.abm, scenario, 1.0, {"h": 1e-3, "p": 2, "q": 5})
    valsa = solve_scenario(Method.valsa, scenario, 1.0, {"h": 0.1})
    np.testing.assert_allclose(abm.resample(valsa.grid).values, valsa.values, atol=2e-3)


def test_inversion_methods_start_from_the_dose() -> None:
    scenario = bolus_scenario(0.1, nominal_params())
    trajectory = solve_scenario(Method.fourier_trapezoid, scenario, 1.0, {"h": 0.25})
    np.testing.assert_allclose(trajectory.grid, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert trajectory.values[0].tolist() == [0.1, 0.0]


@patch(f"{SIMULATE}.print")
def test_simulate_writes_results(mock_print: Mock, tmp_path: Path) -> None:
    config = RunConfig(
        command="simulate",
        method="abm",
        params={"h": 1e-2},
        horizon=0.5,
        output_dir=tmp_path,
    )
    assert simulate(config) == tmp_path
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,A1,A2"
    assert len(lines) == 52
    assert lines[1] == "0.0,0.1,0.0"
    metadata = json.loads((tmp_path / "metadata.json").read_text())
    assert metadata["method"] == "abm"
    assert metadata["order"]["p"] == 19
    assert metadata["order"]["q"] == 46
    assert metadata["order"]["error"] == pytest.approx((1 - 0.587) - 19 / 46)
    assert metadata["config"]["params"] == {"h": 1e-2}
    mock_print.assert_called_once()


@patch(f"{SIMULATE}.print")
def test_simulate_defaults_to_gl(mock_print: Mock, tmp_path: Path) -> None:
    config = RunConfig(
        command="simulate", params={"h": 1e-2, "nu": 10}, horizon=0.1, output_dir=tmp_path
    )
    simulate(config)
    metadata = json.loads((tmp_path / "metadata.json").read_text())
    assert metadata["method"] == "gl"
    assert metadata["h"] == 1e-2
    assert "order" not in metadata


def test_flmm_beats_abm_at_small_base_order() -> None:
    params = nominal_params().with_overrides(alpha=0.6)
    scenario = bolus_scenario(0.1, params)
    options = {"h": 1e-2, "p": 2, "q": 5}
    valsa = solve_scenario(Method.valsa, scenario, 5.0, {"h": 0.05})
    errors = {}
    for method in (Method.abm, Method.flmm):
        trajectory = solve_scenario(method, scenario, 5.0, options)
        errors[method] = np.max(np.abs(trajectory.resample(valsa.grid).A1 - valsa.A1))
    assert errors[Method.flmm] < 1e-4
    assert 10.0 * errors[Method.flmm] < errors[Method.abm]
