"""Run configuration: config files, flag overrides and metadata echo."""

import json
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from dataclasses import fields
from pathlib import Path
from typing import Any
from typing import Optional

import tomli

from .exceptions import ConfigError
from .settings import BOLUS_DOSE
from .settings import DEFAULT_OUTPUT_DIRECTORY
from .settings import SIMULATION_HORIZON


MODEL_KEYS = frozenset({"alpha", "k10", "k12", "k21"})


@dataclass
class RunConfig:
    """Everything a command needs to run, echoed into metadata.json."""

    command: str
    method: Optional[str] = None
    params: dict[str, Any] = field(default_factory=dict)
    model: dict[str, float] = field(default_factory=dict)
    horizon: float = SIMULATION_HORIZON
    dose: float = BOLUS_DOSE
    seed: int = 1
    workers: Optional[int] = None
    output_dir: Path = DEFAULT_OUTPUT_DIRECTORY

    def __post_init__(self) -> None:
        """Check value types that would otherwise fail deep inside a solver."""
        unknown = set(self.model) - MODEL_KEYS
        if unknown:
            raise ConfigError(f"unknown model parameters: {', '.join(sorted(unknown))}")
        try:
            self.model = {k: float(v) for k, v in self.model.items()}
            self.horizon = float(self.horizon)
            self.dose = float(self.dose)
            self.seed = int(self.seed)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"malformed configuration value: {e}") from e
        if self.horizon <= 0:
            raise ConfigError(f"horizon must be positive, got {self.horizon}")
        if self.dose < 0:
            raise ConfigError(f"dose must be non-negative, got {self.dose}")
        if self.workers is not None and int(self.workers) < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        self.output_dir = Path(self.output_dir)

    def to_dict(self) -> dict[str, Any]:
        """Serializable form of the config."""
        content = asdict(self)
        content["output_dir"] = str(self.output_dir)
        return content

    def param(self, name: str, default: Any) -> Any:
        """Method parameter with a fallback."""
        return self.params.get(name, default)

    def check_params(self, allowed: set[str]) -> None:
        """Reject method parameters a command does not understand.

        Raises:
            ConfigError: Some key in params is not in allowed.
        """
        unknown = set(self.params) - allowed
        if unknown:
            raise ConfigError(
                f"unknown parameters for {self.command}: {', '.join(sorted(unknown))}"
            )


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a TOML or JSON config file, chosen by suffix.

    Args:
        path: File ending in .toml or .json.

    Returns:
        The parsed table.

    Raises:
        ConfigError: Unsupported suffix, unreadable or malformed file.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"could not read config file {path}: {e}") from e
    try:
        if path.suffix == ".toml":
            content = tomli.loads(text)
        elif path.suffix == ".json":
            content = json.loads(text)
        else:
            raise ConfigError(f"config file must be .toml or .json, got {path.name}")
    except (tomli.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"malformed config file {path}: {e}") from e
    if not isinstance(content, dict):
        raise ConfigError(f"config file {path} must hold a table at the top level")
    return content


def build_run_config(
    command: str,
    config_file: Optional[Path] = None,
    params: Optional[dict[str, Any]] = None,
    **overrides: Any,
) -> RunConfig:
    """Merge a config file with command-line flags, flags winning.

    Flags left at None do not override the file. Method parameters and model
    overrides are merged key by key.

    Args:
        command: Name of the command being run.
        config_file: Optional TOML or JSON file.
        params: Method parameters given as flags.
        **overrides: Top-level RunConfig fields given as flags.

    Returns:
        The merged configuration.

    Raises:
        ConfigError: Unknown keys or malformed values.
    """
    content = load_config_file(config_file) if config_file is not None else {}
    known = {f.name for f in fields(RunConfig)}
    unknown = set(content) - known
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    content["command"] = command
    merged_params = dict(content.get("params", {}))
    merged_params.update({k: v for k, v in (params or {}).items() if v is not None})
    content["params"] = merged_params
    merged_model = dict(content.get("model", {}))
    merged_model.update(
        {k: v for k, v in (overrides.pop("model", None) or {}).items() if v is not None}
    )
    content["model"] = merged_model
    content.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**content)
    except TypeError as e:
        raise ConfigError(f"malformed configuration: {e}") from e
