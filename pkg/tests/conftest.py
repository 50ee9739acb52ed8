"""Global fixtures."""

from collections.abc import Generator
from unittest.mock import Mock
from unittest.mock import patch

import pytest
from typer.testing import CliRunner


@pytest.fixture
def runner() -> CliRunner:
    """Runner for invoking the fracpk app."""
    return CliRunner()


@pytest.fixture
def error_log() -> Generator[Mock, None, None]:
    """Keep failing commands from writing error logs to the home folder."""
    with patch("fracpk_cli.fracpk.util.create_error_log") as mock_create_log:
        yield mock_create_log
