"""Tests for the config_loader module."""

from pathlib import Path

import pytest

from skein_integrator.config_loader import (
    NamedInvariant,
    SkeinConfig,
    load_config,
    save_config,
)
from skein_integrator.invariants.external_invariant import ExternalInvariant
from skein_integrator.invariants.link_invariants import JonesInvariant, V2Invariant
from skein_integrator.invariants.singular_invariants import (
    ConstantSingularInvariant,
    DerivedInvariant,
)
from skein_integrator.ring import RingElem


@pytest.fixture
def test_configs_path() -> Path:
    """Provide the base path to the test configuration files directory."""
    return Path(__file__).parent / "test_configs"


@pytest.fixture
def valid_config_file(test_configs_path: Path) -> Path:
    """Provide a path to a valid configuration file."""
    return test_configs_path / "valid_config.yaml"


@pytest.fixture
def invalid_yaml_file(test_configs_path: Path) -> Path:
    """Provide a path to an invalid YAML file."""
    return test_configs_path / "invalid_yaml.yaml"


@pytest.fixture
def invalid_schema_file(test_configs_path: Path) -> Path:
    """Provide a path to a YAML file with invalid schema."""
    return test_configs_path / "invalid_schema.yaml"


def test_load_config_success(valid_config_file: Path) -> None:
    """Test that a valid configuration file can be loaded successfully."""
    config = load_config(valid_config_file)

    assert isinstance(config, SkeinConfig)
    assert config.budget == 500
    assert config.crossing_cap == 10
    assert config.child_timeout == 5.0
    assert len(config.invariants) == 2

    remote = config.invariants[0]
    assert remote.name == "remote-jones"
    assert isinstance(remote.invariant, ExternalInvariant)
    assert remote.invariant.command == ("python", "server.py", "serve")
    assert remote.invariant.timeout == 2.5

    derived = config.invariants[1]
    assert derived.name == "derived-v2"
    assert isinstance(derived.invariant, DerivedInvariant)
    assert isinstance(derived.invariant.link_invariant, V2Invariant)

    assert sorted(config.extra_invariants()) == ["derived-v2", "remote-jones"]


def test_defaults() -> None:
    """Test the defaults of an empty configuration."""
    config = SkeinConfig()
    assert config.budget == 2000
    assert config.crossing_cap == 14
    assert config.invariants == ()
    assert config.extra_invariants() == {}
    assert "budget" not in config.model_fields_set


def test_load_config_file_not_found(tmp_path: Path) -> None:
    """Test that FileNotFoundError is raised for a non-existent file."""
    non_existent_file = tmp_path / "non_existent.yaml"
    with pytest.raises(FileNotFoundError):
        load_config(non_existent_file)


def test_load_config_invalid_yaml(invalid_yaml_file: Path) -> None:
    """Test that ValueError is raised for an invalid YAML file."""
    with pytest.raises(ValueError, match="Error parsing configuration file"):
        load_config(invalid_yaml_file)


def test_load_config_invalid_schema(invalid_schema_file: Path) -> None:
    """Test that ValueError is raised for a YAML file with invalid schema."""
    with pytest.raises(ValueError, match="Error parsing configuration file"):
        load_config(invalid_schema_file)


def test_load_config_rejects_zero_budget(tmp_path: Path) -> None:
    """Test the lower bound on the budget."""
    config_file = tmp_path / "zero_budget.yaml"
    config_file.write_text("budget: 0\n", encoding="utf-8")
    with pytest.raises(ValueError, match="greater than or equal to 1"):
        load_config(config_file)


def test_save_config_and_load_back(tmp_path: Path) -> None:
    """Test that a SkeinConfig object can be saved and loaded back correctly."""
    original_config = SkeinConfig(
        budget=300,
        invariants=(
            NamedInvariant(
                name="capped-jones",
                invariant=DerivedInvariant(link_invariant=JonesInvariant(crossing_cap=8)),
            ),
            NamedInvariant(
                name="seven",
                invariant=ConstantSingularInvariant(value=RingElem.monomial(-4, 7)),
            ),
        ),
    )
    output_file = tmp_path / "saved_config.yaml"

    save_config(original_config, output_file)

    loaded_config = load_config(output_file)

    assert loaded_config == original_config
