"""Tests for the rational approximations of s^alpha."""

import numpy as np
import pytest

from fracpk_cli.fracpk.approx.matsuda import continued_fraction_coefficients
from fracpk_cli.fracpk.approx.matsuda import geometric_points
from fracpk_cli.fracpk.approx.matsuda import matsuda_fujii
from fracpk_cli.fracpk.approx.oustaloup import oustaloup
from fracpk_cli.fracpk.approx.oustaloup import oustaloup_design
from fracpk_cli.fracpk.approx.pade import pade_s_alpha
from fracpk_cli.fracpk.approx.pade import taylor_coefficients
from fracpk_cli.fracpk.approx.statespace import realize
from fracpk_cli.fracpk.approx.substitute import substitute_into_pk
from fracpk_cli.fracpk.exceptions import ConfigError
from fracpk_cli.fracpk.exceptions import DegenerateApproximationError
from fracpk_cli.fracpk.model.params import nominal_params


def test_oustaloup_filter_shape() -> None:
    tf = oustaloup(0.413, 1e-2, 1e3, 8)
    zeros, poles, _ = tf.zpk()
    assert len(zeros) == 17
    assert len(poles) == 17
    assert abs(tf.frequency_response([1.0])[0]) == pytest.approx(1.0, rel=0.05)


@pytest.mark.parametrize("alpha, omega_b, omega_h, n", [(0.413, 1e-2, 1e3, 8), (0.7, 1e-3, 1e4, 20)])
def test_oustaloup_pole_zero_ratio(alpha: float, omega_b: float, omega_h: float, n: int) -> None:
    design = oustaloup_design(alpha, omega_b, omega_h, n)
    ratio = (omega_h / omega_b) ** (alpha / (2 * n + 1))
    np.testing.assert_allclose(design.pole_frequencies / design.zero_frequencies, ratio)


def test_oustaloup_center_gain() -> None:
    design = oustaloup_design(0.587, 1e-2, 1e3, 8)
    center = design.center_frequency
    response = design.transfer_function().frequency_response([center])[0]
    assert abs(response) == pytest.approx(center**0.587, rel=1e-6)
    magnitude, phase = design.band_errors()
    assert magnitude >= 0.0
    assert phase < 1.0


@pytest.mark.parametrize(
    "alpha, omega_b, omega_h, n",
    [(0.0, 1e-2, 1e3, 8), (0.5, 1e3, 1e-2, 8), (0.5, 1e-2, 1e3, 0), (0.5, 1e-2, 1e3, 51)],
)
def test_oustaloup_rejects(alpha: float, omega_b: float, omega_h: float, n: int) -> None:
    with pytest.raises(ConfigError):
        oustaloup_design(alpha, omega_b, omega_h, n)


def test_pade_zeroth_order() -> None:
    tf = pade_s_alpha(0.413, 1.0, 0, 0)
    assert tf.numerator_degree == 0
    assert tf.denominator_degree == 0
    assert tf(2.0).real == pytest.approx(1.0)


def test_pade_matches_near_expansion_point() -> None:
    tf = pade_s_alpha(0.413, 1.0, 2, 3)
    assert tf.numerator_degree == 3
    assert tf.denominator_degree == 3
    assert tf(1.0).real == pytest.approx(1.0, abs=1e-12)
    assert tf(1.1).real == pytest.approx(1.1**0.413, abs=1e-6)


def test_taylor_coefficients() -> None:
    np.testing.assert_allclose(taylor_coefficients(0.5, 4.0, 2), [2.0, 0.25])


def series_about(tf: object, s0: float, count: int) -> np.ndarray:
    """First count Taylor coefficients of tf in x = s - s0, by series division."""
    shift = np.poly1d([1.0, s0])
    numerator = np.poly1d(tf.numerator)(shift).coeffs[::-1]  # type: ignore[attr-defined]
    denominator = np.poly1d(tf.denominator)(shift).coeffs[::-1]  # type: ignore[attr-defined]
    numerator = np.pad(numerator, (0, max(0, count - len(numerator))))
    denominator = np.pad(denominator, (0, max(0, count - len(denominator))))
    series = np.zeros(count)
    for k in range(count):
        carried = denominator[1 : k + 1] @ series[:k][::-1]
        series[k] = (numerator[k] - carried) / denominator[0]
    return series


@pytest.mark.parametrize(
    "alpha, s0, m, n", [(0.587, 1.0, 2, 3), (0.587, 1.0, 4, 5), (0.413, 2.0, 3, 3), (0.3, 0.5, 1, 3)]
)
def test_pade_matches_taylor_coefficients(alpha: float, s0: float, m: int, n: int) -> None:
    tf = pade_s_alpha(alpha, s0, m, n)
    count = m + n + 1
    np.testing.assert_allclose(
        series_about(tf, s0, count), taylor_coefficients(alpha, s0, count), rtol=1e-7, atol=1e-10
    )


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_pade_poles_in_left_half_plane(m: int) -> None:
    tf = pade_s_alpha(0.587, 1.0, m, m + 1)
    _, poles, _ = tf.zpk()
    assert len(poles) == m + 1
    assert np.all(poles.real < 0.0)
    assert tf.numerator_degree == tf.denominator_degree


@pytest.mark.parametrize("alpha, s0, m, n", [(1.5, 1.0, 2, 3), (0.5, 0.0, 2, 3), (0.5, 1.0, 3, 2)])
def test_pade_rejects(alpha: float, s0: float, m: int, n: int) -> None:
    with pytest.raises(ConfigError):
        pade_s_alpha(alpha, s0, m, n)


def test_matsuda_recovers_rational_function() -> None:
    def h(s: np.ndarray) -> np.ndarray:
        return (s + 2.0) / (s + 1.0)

    tf = matsuda_fujii(h, [1.0, 2.0, 4.0])
    s = np.array([0.3, 3.0, 10.0 + 1.0j])
    np.testing.assert_allclose(tf(s), h(s), rtol=1e-12)


def test_matsuda_interpolates_nodes() -> None:
    nodes = geometric_points(2.0, -1, 10)
    tf = matsuda_fujii(lambda s: np.power(s, 0.413), nodes)
    np.testing.assert_allclose(tf(nodes).real, nodes**0.413, rtol=1e-6)
    assert tf.numerator_degree == tf.denominator_degree + 1


def test_matsuda_odd_node_count_is_proper() -> None:
    tf = matsuda_fujii(lambda s: np.power(s, 0.413), geometric_points(2.0, 0, 10))
    assert tf.numerator_degree == tf.denominator_degree


def test_matsuda_degenerate_nodes() -> None:
    with pytest.raises(DegenerateApproximationError):
        continued_fraction_coefficients(lambda s: np.ones_like(s), np.array([1.0, 2.0, 3.0]))


@pytest.mark.parametrize("nodes", [[], [1.0, -1.0], [1.0, 1.0]])
def test_matsuda_rejects_nodes(nodes: list[float]) -> None:
    with pytest.raises(ConfigError):
        matsuda_fujii(lambda s: s, nodes)


def test_geometric_points() -> None:
    np.testing.assert_allclose(geometric_points(2.0, -1, 2), [0.5, 1.0, 2.0, 4.0])
    with pytest.raises(ConfigError):
        geometric_points(1.0, 0, 2)


def test_substitution_matches_closed_form() -> None:
    params = nominal_params()
    approximant = pade_s_alpha(params.alpha, 1.0, 2, 3)
    g1, g2 = substitute_into_pk(approximant, params)
    s = np.array([0.5 + 0.2j, 2.0, 3.0j])
    h = approximant(s)
    den = s * h + params.k21 * s + (params.k12 + params.k10) * h + params.k10 * params.k21
    np.testing.assert_allclose(g1(s), (h + params.k21) / den, rtol=1e-9)
    np.testing.assert_allclose(g2(s), params.k12 * h / s / den, rtol=1e-9)
    assert realize(g1).order == g1.denominator_degree


def test_substitution_accepts_even_matsuda() -> None:
    params = nominal_params()
    approximant = matsuda_fujii(lambda s: np.power(s, params.alpha), geometric_points(2.0, -1, 10))
    g1, g2 = substitute_into_pk(approximant, params)
    assert g1.is_proper
    assert g2.relative_degree >= 1
