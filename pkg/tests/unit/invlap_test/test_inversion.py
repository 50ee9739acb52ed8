"""Tests for numerical inverse Laplace transformation."""

import math
from typing import Callable

import numpy as np
import pytest

from fracpk_cli.fracpk.calculus.special import mittag_leffler_grid
from fracpk_cli.fracpk.exceptions import ConfigError
from fracpk_cli.fracpk.exceptions import InversionError
from fracpk_cli.fracpk.invlap.dehoog import fourier_trapezoid_invert
from fracpk_cli.fracpk.invlap.dehoog import fourier_trapezoid_invert_many
from fracpk_cli.fracpk.invlap.grid import invert_many
from fracpk_cli.fracpk.invlap.grid import invert_on_grid
from fracpk_cli.fracpk.invlap.transform import InversionConfig
from fracpk_cli.fracpk.invlap.transform import InversionMethod
from fracpk_cli.fracpk.invlap.transform import TransformFunction
from fracpk_cli.fracpk.invlap.valsa import euler_weights
from fracpk_cli.fracpk.invlap.valsa import valsa_invert
from fracpk_cli.fracpk.invlap.valsa import valsa_invert_many
from fracpk_cli.fracpk.model.params import nominal_params
from fracpk_cli.fracpk.model.params import transfer_functions


VALSA = InversionConfig(method=InversionMethod.valsa, a=11.0)
FOURIER = InversionConfig(method=InversionMethod.fourier_trapezoid)

step = TransformFunction(lambda s: 1.0 / s, 0.0, "step")
decay = TransformFunction(lambda s: 1.0 / (s + 1.0), -1.0, "decay")
ramp = TransformFunction(lambda s: 1.0 / s**2, 0.0, "ramp")
half_power = TransformFunction(lambda s: s**-0.5, 0.0, "half-power")
damped_sine = TransformFunction(lambda s: 1.0 / ((s + 0.5) ** 2 + 4.0), -0.5, "damped-sine")
relaxation = TransformFunction(lambda s: s**-0.5 / (s**0.5 + 1.0), 0.0, "relaxation")

PAIRS = [
    (step, lambda t: np.ones_like(t)),
    (ramp, lambda t: t),
    (decay, lambda t: np.exp(-t)),
    (damped_sine, lambda t: np.exp(-0.5 * t) * np.sin(2.0 * t) / 2.0),
    (half_power, lambda t: 1.0 / np.sqrt(np.pi * t)),
    (relaxation, lambda t: mittag_leffler_grid(0.5, 1.0, -np.sqrt(t))),
]


def test_valsa_unit_step() -> None:
    assert valsa_invert(step, 1.0, VALSA) == pytest.approx(1.0, abs=1e-8)


def test_valsa_exponential() -> None:
    assert valsa_invert(decay, 2.0, VALSA) == pytest.approx(math.exp(-2.0), abs=1e-8)


def test_valsa_many_times() -> None:
    times = np.array([0.1, 0.5, 1.0, 4.0])
    np.testing.assert_allclose(valsa_invert_many(decay, times, VALSA), np.exp(-times), atol=1e-8)


def test_valsa_rejects_non_positive_time() -> None:
    with pytest.raises(ConfigError):
        valsa_invert(step, 0.0, VALSA)


def test_valsa_reports_failing_time() -> None:
    broken = TransformFunction(lambda s: np.full(np.shape(s), np.nan, dtype=complex))
    with pytest.raises(InversionError) as error:
        valsa_invert(broken, 2.0, VALSA)
    assert error.value.t == 2.0


def test_euler_weights_sum_to_one() -> None:
    direct, weights = euler_weights(999)
    assert direct == 666
    assert len(weights) == 334
    assert weights.sum() == pytest.approx(1.0)


def test_fourier_ramp() -> None:
    assert fourier_trapezoid_invert(ramp, 3.0, FOURIER) == pytest.approx(3.0, abs=1e-7)


def test_fourier_half_power() -> None:
    expected = 1.0 / math.sqrt(math.pi)
    assert fourier_trapezoid_invert(half_power, 1.0, FOURIER) == pytest.approx(
        expected, abs=1e-6
    )


def test_fourier_fixed_half_period_limit() -> None:
    config = InversionConfig(method=InversionMethod.fourier_trapezoid, half_period=1.0)
    with pytest.raises(ConfigError):
        fourier_trapezoid_invert_many(step, np.array([0.5, 2.5]), config)


def test_methods_agree_on_plasma_transform() -> None:
    g1, _ = transfer_functions(nominal_params())
    transform = g1.scaled(0.1)
    grid = np.linspace(5.0 / 499, 5.0, 499)
    valsa = valsa_invert_many(transform, grid, VALSA)
    fourier = fourier_trapezoid_invert_many(transform, grid, FOURIER)
    np.testing.assert_allclose(fourier, valsa, atol=1e-6)


def test_invert_on_grid_step() -> None:
    grid = np.array([0.5, 1.0, 2.0])
    trajectory = invert_on_grid(step, grid, VALSA)
    assert trajectory.columns == ("f",)
    np.testing.assert_allclose(trajectory.values[:, 0], 1.0, atol=1e-8)


def test_invert_on_grid_compartments() -> None:
    trajectory = invert_on_grid(transfer_functions(nominal_params()), np.array([1.0]), VALSA)
    assert trajectory.columns == ("A1", "A2")
    assert trajectory.values.shape == (1, 2)


def test_invert_on_empty_grid() -> None:
    trajectory = invert_on_grid(step, np.array([]), FOURIER)
    assert len(trajectory) == 0


@pytest.mark.parametrize("grid", [[0.0, 1.0], [1.0, 0.5]])
def test_invert_on_grid_rejects(grid: list[float]) -> None:
    with pytest.raises(ConfigError):
        invert_on_grid(step, np.array(grid), VALSA)


@pytest.mark.parametrize(
    "options",
    [{"a": 0.0}, {"term_count": 5}, {"half_period": -1.0}, {"half_period_factor": 0.4}, {"tolerance": 2.0}],
)
def test_inversion_config_rejects(options: dict[str, float]) -> None:
    with pytest.raises(ConfigError):
        InversionConfig(**options)  # type: ignore[arg-type]


def test_inversion_config_terms() -> None:
    assert VALSA.terms == 1000
    assert FOURIER.terms == 81
    assert InversionConfig(term_count=50).terms == 50
    assert VALSA.to_dict()["method"] == "valsa"


def test_scaled_transform() -> None:
    assert step.scaled(0.1)(2.0) == pytest.approx(0.05)


@pytest.mark.parametrize("config", [VALSA, FOURIER], ids=["valsa", "fourier"])
@pytest.mark.parametrize("transform, exact", PAIRS, ids=[pair[0].label for pair in PAIRS])
def test_known_pairs(
    transform: TransformFunction,
    exact: Callable[[np.ndarray], np.ndarray],
    config: InversionConfig,
) -> None:
    times = np.linspace(0.1, 5.0, 50)
    np.testing.assert_allclose(invert_many(transform, times, config), exact(times), atol=1e-6)


@pytest.mark.parametrize(
    "config, atol", [(VALSA, 1e-10), (FOURIER, 1e-6)], ids=["valsa", "fourier"]
)
def test_inversion_is_linear(config: InversionConfig, atol: float) -> None:
    combined = TransformFunction(lambda s: 2.0 * decay(s) - 3.0 * damped_sine(s), 0.0)
    times = np.linspace(0.1, 5.0, 20)
    expected = 2.0 * invert_many(decay, times, config) - 3.0 * invert_many(
        damped_sine, times, config
    )
    np.testing.assert_allclose(invert_many(combined, times, config), expected, atol=atol)


def test_valsa_error_falls_with_a() -> None:
    errors = [
        abs(valsa_invert(decay, 1.0, InversionConfig(a=a)) - math.exp(-1.0))
        for a in (2.0, 4.0, 6.0, 8.0)
    ]
    assert errors == sorted(errors, reverse=True)
    # leading term of the kernel expansion: e^{-2a} f(3t)
    assert errors[0] == pytest.approx(math.exp(-4.0 - 3.0), rel=5e-2)
    assert errors[1] == pytest.approx(math.exp(-8.0 - 3.0), rel=5e-2)
