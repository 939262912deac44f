"""Tests for the __main__ module."""

import json
import sys
from pathlib import Path

import pytest
from typer.testing import CliRunner

from skein_integrator.__main__ import BUDGET_ENV_VAR, _budget, app
from skein_integrator.config_loader import SkeinConfig, load_config
from skein_integrator.diagram import Crossing, SingularDiagram
from skein_integrator.integrability import Corpus
from skein_integrator.integrator import LoopPath
from skein_integrator.invariants.bracket import jones_a
from skein_integrator.ring import RingElem
from skein_integrator.tables import table_diagram

runner = CliRunner()

CHILD = Path(__file__).parent / "fixtures" / "derived_jones_child.py"


@pytest.fixture
def scrambled_file(tmp_path: Path) -> Path:
    """Provide a well-formed document whose arcs do not pair up."""
    d = SingularDiagram(
        components=1, crossings=(Crossing(id=0, kind="pos", ends=(1, 2, 3, 5)),)
    )
    path = tmp_path / "scrambled.json"
    path.write_text(d.to_json(), encoding="utf-8")
    return path


@pytest.fixture
def figure_eight_file(tmp_path: Path) -> Path:
    """Provide the figure-eight knot as a diagram document."""
    path = tmp_path / "4_1.json"
    path.write_text(table_diagram("4_1").to_json(), encoding="utf-8")
    return path


@pytest.fixture
def kink_corpus_file(tmp_path: Path) -> Path:
    """Provide a small kink corpus written by gen-corpus."""
    path = tmp_path / "corpus.json"
    result = runner.invoke(
        app,
        [
            "gen-corpus",
            "--kind",
            "kink",
            "--seed",
            "3",
            "--table",
            "unknot",
            "--table",
            "3_1",
            "--size",
            "3",
            "--walk-length",
            "2",
            "--out",
            str(path),
        ],
    )
    assert result.exit_code == 0, result.output
    return path


def test_validate_table_diagram() -> None:
    """Test that table diagrams validate."""
    result = runner.invoke(app, ["validate", "--table", "3_1"])

    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["ok"] is True


def test_validate_scrambled_diagram(scrambled_file: Path) -> None:
    """Test that structural faults give failed checks and exit status 1."""
    result = runner.invoke(app, ["validate", "--in", str(scrambled_file)])

    assert result.exit_code == 1
    report = json.loads(result.stdout)
    assert report["ok"] is False
    assert [check["name"] for check in report["checks"] if not check["ok"]] == [
        "arc_pairing"
    ]


def test_validate_malformed_document(tmp_path: Path) -> None:
    """Test that unparsable input gives an error report and exit status 2."""
    bad_file = tmp_path / "bad.json"
    bad_file.write_text("{not json", encoding="utf-8")

    result = runner.invoke(app, ["validate", "--in", str(bad_file)])

    assert result.exit_code == 2
    assert json.loads(result.stdout)["code"] == "ValidationError"


def test_in_and_table_are_exclusive(figure_eight_file: Path) -> None:
    """Test that giving both inputs is an input error."""
    result = runner.invoke(
        app, ["integrate", "--in", str(figure_eight_file), "--table", "3_1"]
    )

    assert result.exit_code == 2
    assert "exactly one of --in and --table" in json.loads(result.stdout)["message"]


def test_unknown_table_name() -> None:
    """Test the error report of a diagram error."""
    result = runner.invoke(app, ["invariant", "--table", "10_161"])

    assert result.exit_code == 2
    assert json.loads(result.stdout)["code"] == "diagram-invalid"


def test_invariant_command() -> None:
    """Test evaluation of link invariants."""
    result = runner.invoke(app, ["invariant", "--table", "3_1"])
    assert result.exit_code == 0, result.output
    value = RingElem.model_validate(json.loads(result.stdout)["value"])
    assert value == jones_a(table_diagram("3_1"))

    result = runner.invoke(app, ["invariant", "--invariant", "v2", "--table", "5_1"])
    assert result.exit_code == 0, result.output
    assert RingElem.model_validate(json.loads(result.stdout)["value"]) == RingElem.from_int(3)


def test_resolve_command() -> None:
    """Test switching a crossing through a double point."""
    result = runner.invoke(
        app,
        ["resolve", "--table", "3_1", "--crossing", "0", "--sign", "minus", "--singularize"],
    )

    assert result.exit_code == 0, result.output
    resolved = SingularDiagram.model_validate_json(result.stdout)
    assert resolved.crossing(0).kind == "neg"


def test_resolve_signed_crossing_fails() -> None:
    """Test that resolving a signed crossing is an input error."""
    result = runner.invoke(
        app, ["resolve", "--table", "3_1", "--crossing", "0", "--sign", "plus"]
    )

    assert result.exit_code == 2
    assert json.loads(result.stdout)["code"] == "crossing-kind"


def test_derive_command() -> None:
    """Test the derived invariant with both resolutions."""
    result = runner.invoke(app, ["derive", "--table", "3_1", "--crossing", "0"])

    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    expected = jones_a(table_diagram("3_1")) - RingElem.one()
    assert RingElem.model_validate(report["value"]) == expected
    assert RingElem.model_validate(report["resolutions"]["minus"]) == RingElem.one()


def test_derive_with_external_server() -> None:
    """Test that the external bridge reports the same value as the builtin."""
    command = f"{sys.executable} {CHILD} serve"
    builtin = runner.invoke(app, ["derive", "--table", "4_1", "--crossing", "2"])
    external = runner.invoke(
        app, ["derive", "--table", "4_1", "--crossing", "2", "--external-cmd", command]
    )

    assert external.exit_code == 0, external.output
    external_report = json.loads(external.stdout)
    assert external_report["invariant"] == "external"
    assert external_report["value"] == json.loads(builtin.stdout)["value"]


def test_derive_with_failing_server() -> None:
    """Test that a crashing server gives an error report."""
    command = f"{sys.executable} {CHILD} exit"
    result = runner.invoke(
        app, ["derive", "--table", "3_1", "--crossing", "0", "--external-cmd", command]
    )

    assert result.exit_code == 2
    assert json.loads(result.stdout)["code"] == "external-invariant"


def test_gen_corpus_command(kink_corpus_file: Path) -> None:
    """Test that gen-corpus writes a loadable corpus."""
    corpus = Corpus.model_validate_json(kink_corpus_file.read_text(encoding="utf-8"))

    assert corpus.kind == "kink"
    assert len(corpus.items) == 3
    assert corpus.params.random_seed == 3


def test_check_local_command(kink_corpus_file: Path) -> None:
    """Test the kink condition for an integrable and a control invariant."""
    result = runner.invoke(
        app, ["check-local", "--condition", "kink", "--corpus", str(kink_corpus_file)]
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["passed"] is True

    result = runner.invoke(
        app,
        [
            "check-local",
            "--condition",
            "kink",
            "--corpus",
            str(kink_corpus_file),
            "--invariant",
            "jonesplus",
        ],
    )
    assert result.exit_code == 1
    assert len(json.loads(result.stdout)["failures"]) == 3


def test_check_local_with_workers(kink_corpus_file: Path) -> None:
    """Test that the report does not depend on the number of workers."""
    arguments = [
        "check-local",
        "--condition",
        "kink",
        "--corpus",
        str(kink_corpus_file),
        "--invariant",
        "jonesplus",
    ]
    single = runner.invoke(app, arguments)
    pooled = runner.invoke(app, [*arguments, "--workers", "4"])

    assert pooled.exit_code == single.exit_code == 1
    assert pooled.stdout == single.stdout


def test_reports_match_with_external_server(kink_corpus_file: Path) -> None:
    """Test that builtin and external evaluation give byte-identical reports."""
    command = f"{sys.executable} {CHILD} serve"
    for arguments in (
        ["check-local", "--condition", "kink", "--corpus", str(kink_corpus_file)],
        ["path-independence", "--table", "4_1", "--seed", "1", "--paths", "3"],
    ):
        builtin = runner.invoke(app, arguments)
        external = runner.invoke(app, [*arguments, "--external-cmd", command])

        assert builtin.exit_code == 0, builtin.output
        assert external.exit_code == 0, external.output
        assert external.stdout == builtin.stdout


def test_check_local_wrong_corpus(kink_corpus_file: Path) -> None:
    """Test that a kink corpus cannot be used for commutation."""
    result = runner.invoke(
        app,
        ["check-local", "--condition", "commutation", "--corpus", str(kink_corpus_file)],
    )

    assert result.exit_code == 2


def test_gen_loop_and_audit_loop(tmp_path: Path) -> None:
    """Test auditing a generated kink loop."""
    loop_file = tmp_path / "loop.json"
    result = runner.invoke(
        app,
        ["gen-loop", "kink", "--table", "3_1", "--seed", "0", "--out", str(loop_file)],
    )
    assert result.exit_code == 0, result.output
    LoopPath.model_validate_json(loop_file.read_text(encoding="utf-8"))

    result = runner.invoke(app, ["audit-loop", "--loop", str(loop_file)])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["ok"] is True

    result = runner.invoke(
        app, ["audit-loop", "--loop", str(loop_file), "--invariant", "jonesplus"]
    )
    assert result.exit_code == 1
    report = json.loads(result.stdout)
    assert report["closed"] is True
    assert RingElem.model_validate(report["defect"]) == -jones_a(table_diagram("3_1"))


def test_gen_loop_commutator_crossings() -> None:
    """Test the explicit and the missing crossing pair."""
    result = runner.invoke(
        app,
        ["gen-loop", "commutator", "--table", "3_1", "--seed", "0", "--crossing", "0", "--crossing", "1"],
    )
    assert result.exit_code == 0, result.output
    loop = LoopPath.model_validate_json(result.stdout)
    assert [event.crossing for event in loop.events] == [0, 1, 0, 1]  # type: ignore[union-attr]

    result = runner.invoke(
        app, ["gen-loop", "commutator", "--table", "3_1", "--seed", "0", "--crossing", "0"]
    )
    assert result.exit_code == 2

    result = runner.invoke(app, ["gen-loop", "commutator", "--table", "unknot", "--seed", "0"])
    assert result.exit_code == 2


def test_integrate_command(figure_eight_file: Path) -> None:
    """Test integration of the derived Jones invariant."""
    result = runner.invoke(app, ["integrate", "--in", str(figure_eight_file)])

    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert [check["name"] for check in report["checks"]] == ["matches_direct_evaluation"]
    assert report["ok"] is True
    value = RingElem.model_validate(report["witnesses"][0]["value"])
    assert value == jones_a(table_diagram("4_1"))


def test_path_independence_command() -> None:
    """Test that three paths agree on the trefoil."""
    result = runner.invoke(
        app, ["path-independence", "--table", "3_1", "--seed", "0", "--paths", "3"]
    )

    assert result.exit_code == 0, result.output
    assert len(json.loads(result.stdout)["checks"]) == 3


def test_config_file_registers_invariants(tmp_path: Path) -> None:
    """Test that configured invariants can be used by name."""
    config_file = tmp_path / "config.yaml"
    config_file.write_text(
        "invariants:\n"
        "  - name: derived-v2\n"
        "    invariant:\n"
        "      invariant_name: derived\n"
        "      link_invariant:\n"
        "        invariant_name: v2\n",
        encoding="utf-8",
    )

    result = runner.invoke(
        app,
        [
            "integrate",
            "--table",
            "5_2",
            "--invariant",
            "derived-v2",
            "--config-file",
            str(config_file),
        ],
    )

    assert result.exit_code == 0, result.output
    value = json.loads(result.stdout)["witnesses"][0]["value"]
    assert RingElem.model_validate(value) == RingElem.from_int(2)


def test_budget_precedence(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test the order option, config file, environment, default."""
    monkeypatch.delenv(BUDGET_ENV_VAR, raising=False)
    assert _budget(None, SkeinConfig()) == 2000

    monkeypatch.setenv(BUDGET_ENV_VAR, "40")
    assert _budget(None, SkeinConfig()) == 40
    assert _budget(None, SkeinConfig(budget=5)) == 5
    assert _budget(7, SkeinConfig(budget=5)) == 7

    monkeypatch.setenv(BUDGET_ENV_VAR, "lots")
    with pytest.raises(ValueError, match="must be an integer"):
        _budget(None, SkeinConfig())


def test_write_config_command(tmp_path: Path) -> None:
    """Test that the effective configuration is written with overrides applied."""
    config_file = tmp_path / "config.yaml"
    config_file.write_text("budget: 300\nchild_timeout: 5.0\n", encoding="utf-8")
    out = tmp_path / "effective.yaml"

    result = runner.invoke(
        app,
        ["write-config", "--out", str(out), "--workers", "3", "--config-file", str(config_file)],
    )

    assert result.exit_code == 0, result.output
    written = load_config(out)
    assert written.budget == 300
    assert written.workers == 3
    assert written.child_timeout == 5.0


def test_write_config_defaults(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that the environment budget reaches the written defaults."""
    monkeypatch.setenv(BUDGET_ENV_VAR, "40")
    out = tmp_path / "effective.yaml"

    result = runner.invoke(app, ["write-config", "--out", str(out)])

    assert result.exit_code == 0, result.output
    assert load_config(out) == SkeinConfig(budget=40)


def test_show_config_schema_command() -> None:
    """Test the show-config-schema command."""
    result = runner.invoke(app, ["show-config-schema"])

    assert result.exit_code == 0
    assert json.loads(result.stdout) == SkeinConfig.model_json_schema()
