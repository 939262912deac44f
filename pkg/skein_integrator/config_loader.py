"""Configuration loading and validation for skein-integrator."""

from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic_yaml import parse_yaml_raw_as, to_yaml_str
from ruamel.yaml.error import YAMLError

from skein_integrator.invariants.bracket import DEFAULT_CROSSING_CAP
from skein_integrator.invariants.registry import SingularInvariant

DEFAULT_BUDGET = 2000


class NamedInvariant(BaseModel):
    """A singular invariant registered under a user-chosen name."""

    name: str
    invariant: SingularInvariant
    model_config = ConfigDict(frozen=True)


class SkeinConfig(BaseModel):
    """Overall configuration for skein-integrator."""

    budget: int = Field(default=DEFAULT_BUDGET, ge=1)
    crossing_cap: int = Field(default=DEFAULT_CROSSING_CAP, ge=0)
    child_timeout: float = Field(default=30.0, gt=0)
    workers: int = Field(default=1, ge=1)
    invariants: tuple[NamedInvariant, ...] = ()
    model_config = ConfigDict(frozen=True)

    def extra_invariants(self) -> dict[str, SingularInvariant]:
        """Configured invariants keyed by name."""
        return {entry.name: entry.invariant for entry in self.invariants}


def load_config(file_path: Path) -> SkeinConfig:
    """Load and validate the configuration from a YAML file.

    Args:
        file_path: The path to the YAML configuration file.

    Returns
    -------
        A SkeinConfig object representing the loaded configuration.

    Raises
    ------
        FileNotFoundError: If the configuration file does not exist.
        ValueError: If there is an error parsing or validating the configuration file.
    """
    if not file_path.exists():
        msg = f"Configuration file not found: {file_path}"
        raise FileNotFoundError(msg)

    try:
        yaml_content = file_path.read_text(encoding="utf-8")
        return parse_yaml_raw_as(SkeinConfig, yaml_content)
    except (YAMLError, ValidationError) as e:
        msg = f"Error parsing configuration file {file_path}: {e}"
        raise ValueError(msg) from e


def save_config(config: SkeinConfig, file_path: Path) -> None:
    """Save the configuration to a YAML file."""
    file_path.write_text(to_yaml_str(config), encoding="utf-8")
