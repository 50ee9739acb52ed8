"""Test cases for the --help option."""

import pytest
from typer.testing import CliRunner

from fracpk_cli.fracpk.app import app


runner = CliRunner()


@pytest.mark.parametrize(
    "command, text",
    [
        ("simulate", "Simulate the response to a bolus dose"),
        ("approx", "pade, oustaloup or matsuda"),
        ("benchmark", "Method family to run"),
        ("benchmark", "h=1e-5"),
        ("schedule", "Compute the optimal dosing schedule"),
        ("population", "Number of patients"),
    ],
)
def test_app_command_help(command: str, text: str) -> None:
    """Checks if the cli prints help description when supplied with <command> --help."""
    result = runner.invoke(app, [command, "--help"], catch_exceptions=False)
    assert result.exit_code == 0
    assert text in result.stdout


def test_app_help() -> None:
    result = runner.invoke(app, ["--help"], catch_exceptions=False)
    assert result.exit_code == 0
    for command in ("simulate", "approx", "benchmark", "schedule", "population"):
        assert command in result.stdout
