"""CLI application."""

import functools
import json
import os
import random
import shlex
from collections.abc import Callable
from contextlib import closing
from enum import StrEnum
from pathlib import Path
from typing import Annotated, assert_never

import typer
from logzero import logger
from pydantic import BaseModel, ValidationError

from skein_integrator.config_loader import SkeinConfig, load_config, save_config
from skein_integrator.diagram import (
    LinkDiagram,
    SingularDiagram,
    components,
    parse_pd,
    unlink,
)
from skein_integrator.diagram import validate as validate_diagram
from skein_integrator.errors import SkeinError
from skein_integrator.integrability import (
    Corpus,
    CorpusParams,
    check_condition1,
    check_condition2,
    gen_kink_corpus,
    gen_order2_corpus,
)
from skein_integrator.integrator import (
    HomotopyPath,
    LoopPath,
    gen_loop_commutator,
    gen_loop_composite,
    gen_loop_conjugated,
    gen_loop_kink,
    integrate_with_path,
    loop_audit,
    path_independence_report,
)
from skein_integrator.invariants.base_invariant import double_point
from skein_integrator.invariants.external_invariant import ExternalInvariant
from skein_integrator.invariants.link_invariants import LinkInvariant
from skein_integrator.invariants.registry import (
    SingularInvariant,
    lookup_invariant,
    lookup_link_invariant,
)
from skein_integrator.invariants.singular_invariants import DerivedInvariant
from skein_integrator.moves import ResolutionSign, make_singular
from skein_integrator.moves import resolve as resolve_crossing
from skein_integrator.reports import Check, ErrorReport, Report, ValueReport
from skein_integrator.ring import RingElem
from skein_integrator.tables import table_diagram

app = typer.Typer()

BUDGET_ENV_VAR = "SKEIN_BUDGET_DEFAULT"


class SignChoice(StrEnum):
    """Resolution of a double point."""

    PLUS = "plus"
    MINUS = "minus"
    ZERO = "zero"


class ConditionChoice(StrEnum):
    """Local integrability condition."""

    KINK = "kink"
    COMMUTATION = "commutation"


class CorpusChoice(StrEnum):
    """Order of the generated corpus."""

    KINK = "kink"
    ORDER2 = "order2"


class LoopChoice(StrEnum):
    """Family of generated loops."""

    KINK = "kink"
    COMMUTATOR = "commutator"
    CONJUGATED = "conjugated"
    COMPOSITE = "composite"


SIGNS: dict[SignChoice, ResolutionSign] = {
    SignChoice.PLUS: "plus",
    SignChoice.MINUS: "minus",
    SignChoice.ZERO: "zero",
}

InFile = Annotated[
    Path | None,
    typer.Option("--in", exists=True, file_okay=True, dir_okay=False, help="Diagram JSON file."),
]
Table = Annotated[str | None, typer.Option(help="Table diagram to use instead of --in.")]
OutFile = Annotated[
    Path | None, typer.Option("--out", dir_okay=False, help="Write the report here.")
]
ConfigFile = Annotated[
    Path | None,
    typer.Option(exists=True, file_okay=True, dir_okay=False),
]
InvariantName = Annotated[str, typer.Option(help="Registered invariant name.")]
ExternalCommand = Annotated[
    str | None, typer.Option(help="Command line of an external invariant server.")
]
Budget = Annotated[int | None, typer.Option(min=1, help="Search node budget.")]
Workers = Annotated[
    int | None, typer.Option(min=1, help="Threads that evaluate independent items.")
]
BaseInvariant = Annotated[
    str,
    typer.Option(
        "--base",
        help="Link invariant giving the values on unlinks when the singular invariant is not derived.",
    ),
]


def reports_errors[**P](command: Callable[P, None]) -> Callable[P, None]:
    """Print input errors as an error report and exit with status 2."""

    @functools.wraps(command)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> None:
        try:
            command(*args, **kwargs)
        except (SkeinError, ValidationError, FileNotFoundError, ValueError) as e:
            logger.error(f"{command.__name__} failed: {e}")
            typer.echo(ErrorReport.from_exception(e).model_dump_json(indent=2))
            raise typer.Exit(code=2) from e

    return wrapper


def _config(config_file: Path | None) -> SkeinConfig:
    if config_file is None:
        return SkeinConfig()
    config = load_config(config_file)
    logger.info(f"Loaded configuration from {config_file}")
    return config


def _budget(budget: int | None, config: SkeinConfig) -> int:
    """``--budget``, then the config file, then the environment, then the default."""
    if budget is not None:
        return budget
    if "budget" in config.model_fields_set:
        return config.budget
    env_value = os.environ.get(BUDGET_ENV_VAR)
    if env_value:
        try:
            return int(env_value)
        except ValueError as e:
            msg = f"{BUDGET_ENV_VAR} must be an integer, got {env_value!r}"
            raise ValueError(msg) from e
    return config.budget


def _workers(workers: int | None, config: SkeinConfig) -> int:
    return config.workers if workers is None else workers


def _diagram(in_file: Path | None, table: str | None) -> SingularDiagram:
    if in_file is not None and table is None:
        return parse_pd(in_file.read_text(encoding="utf-8"))
    if table is not None and in_file is None:
        return table_diagram(table)
    msg = "Give exactly one of --in and --table"
    raise ValueError(msg)


def _singular_invariant(
    name: str, external_cmd: str | None, config: SkeinConfig
) -> SingularInvariant:
    if external_cmd is not None:
        logger.info(f"Using external invariant server {external_cmd!r}")
        return ExternalInvariant(
            command=tuple(shlex.split(external_cmd)), timeout=config.child_timeout
        )
    return lookup_invariant(name, config.extra_invariants(), config.crossing_cap)


def _base_values(
    f: SingularInvariant, d: LinkDiagram, base: str, config: SkeinConfig
) -> tuple[LinkInvariant, dict[int, RingElem]]:
    """Link invariant fixing the constants, and its value on the matching unlink."""
    link_invariant = (
        f.link_invariant
        if isinstance(f, DerivedInvariant)
        else lookup_link_invariant(base, config.crossing_cap)
    )
    m = components(d)
    return link_invariant, {m: link_invariant.evaluate(unlink(m))}


def _emit(report: BaseModel, out: Path | None) -> None:
    text = report.model_dump_json(indent=2)
    if out is None:
        typer.echo(text)
    else:
        out.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {out}")


def _finish(report: BaseModel, out: Path | None, *, ok: bool) -> None:
    _emit(report, out)
    if not ok:
        raise typer.Exit(code=1)


@app.command()
@reports_errors
def validate(in_file: InFile = None, table: Table = None, out: OutFile = None) -> None:
    """Check the structural consistency of a diagram."""
    if in_file is not None and table is None:
        d = SingularDiagram.model_validate_json(in_file.read_text(encoding="utf-8"))
    else:
        d = _diagram(in_file, table)
    report = validate_diagram(d)
    logger.info(f"Diagram with {d.crossing_count} crossings: ok={report.ok}")
    _finish(report, out, ok=report.ok)


@app.command()
@reports_errors
def resolve(  # noqa: PLR0913
    crossing: Annotated[int, typer.Option(help="Id of the double point.")],
    sign: Annotated[SignChoice, typer.Option()],
    in_file: InFile = None,
    table: Table = None,
    *,
    singularize: Annotated[
        bool, typer.Option(help="Turn the crossing into a double point first.")
    ] = False,
    out: OutFile = None,
) -> None:
    """Resolve a double point of a singular diagram."""
    d = _diagram(in_file, table)
    if singularize:
        d = make_singular(d, crossing)
    _emit(resolve_crossing(d, crossing, SIGNS[sign]), out)


@app.command()
@reports_errors
def invariant(
    invariant: InvariantName = "jones",
    in_file: InFile = None,
    table: Table = None,
    out: OutFile = None,
    config_file: ConfigFile = None,
) -> None:
    """Evaluate a link invariant on a link diagram."""
    config = _config(config_file)
    d = _diagram(in_file, table).as_link()
    link_invariant = lookup_link_invariant(invariant, config.crossing_cap)
    value = link_invariant.evaluate(d)
    _emit(ValueReport(subject="invariant", invariant=invariant, value=value), out)


@app.command()
@reports_errors
def derive(  # noqa: PLR0913
    invariant: InvariantName = "jones",
    external_cmd: ExternalCommand = None,
    crossing: Annotated[
        int | None, typer.Option(help="Turn this crossing into the double point first.")
    ] = None,
    in_file: InFile = None,
    table: Table = None,
    out: OutFile = None,
    config_file: ConfigFile = None,
) -> None:
    """Evaluate a singular invariant on a diagram with one double point."""
    config = _config(config_file)
    d = _diagram(in_file, table)
    if crossing is not None:
        d = make_singular(d, crossing)
    with closing(_singular_invariant(invariant, external_cmd, config)) as f:
        value = f.evaluate(d)
        resolutions: dict[str, RingElem] = {}
        if isinstance(f, DerivedInvariant):
            p = double_point(d)
            positive = resolve_crossing(d, p, "plus").as_link()
            negative = resolve_crossing(d, p, "minus").as_link()
            resolutions = {
                "plus": f.link_invariant.evaluate(positive),
                "minus": f.link_invariant.evaluate(negative),
            }
    name = "external" if external_cmd is not None else invariant
    _emit(
        ValueReport(subject="derive", invariant=name, value=value, resolutions=resolutions),
        out,
    )


@app.command()
@reports_errors
def check_local(  # noqa: PLR0913
    condition: Annotated[ConditionChoice, typer.Option()],
    corpus: Annotated[
        Path, typer.Option(exists=True, file_okay=True, dir_okay=False, help="Corpus JSON file.")
    ],
    invariant: InvariantName = "jones",
    external_cmd: ExternalCommand = None,
    workers: Workers = None,
    out: OutFile = None,
    config_file: ConfigFile = None,
) -> None:
    """Check a local integrability condition over a corpus."""
    config = _config(config_file)
    loaded = Corpus.model_validate_json(corpus.read_text(encoding="utf-8"))
    logger.info(f"Loaded {len(loaded.items)} {loaded.kind} items from {corpus}")
    with closing(_singular_invariant(invariant, external_cmd, config)) as f:
        match condition:
            case ConditionChoice.KINK:
                report = check_condition1(f, loaded, _workers(workers, config))
            case ConditionChoice.COMMUTATION:
                report = check_condition2(f, loaded, _workers(workers, config))
            case _ as unexpected_condition:
                assert_never(unexpected_condition)
    _finish(report, out, ok=report.passed)


@app.command()
@reports_errors
def gen_corpus(  # noqa: PLR0913
    kind: Annotated[CorpusChoice, typer.Option()],
    seed: Annotated[int, typer.Option(help="Random seed.")],
    in_files: Annotated[
        list[Path] | None,
        typer.Option("--in", exists=True, file_okay=True, dir_okay=False, help="Seed diagram."),
    ] = None,
    tables: Annotated[list[str] | None, typer.Option("--table", help="Seed table diagram.")] = None,
    size: Annotated[int, typer.Option(min=1)] = 10,
    walk_length: Annotated[int, typer.Option(min=0)] = 5,
    max_crossings: Annotated[int, typer.Option(min=2)] = 10,
    out: OutFile = None,
) -> None:
    """Generate a reproducible corpus of singular diagrams."""
    seeds = [parse_pd(path.read_text(encoding="utf-8")).as_link() for path in in_files or []]
    seeds.extend(table_diagram(name) for name in tables or [])
    params = CorpusParams(
        walk_length=walk_length, size=size, random_seed=seed, max_crossings=max_crossings
    )
    match kind:
        case CorpusChoice.KINK:
            corpus = gen_kink_corpus(seeds, params)
        case CorpusChoice.ORDER2:
            corpus = gen_order2_corpus(seeds, params)
        case _ as unexpected_kind:
            assert_never(unexpected_kind)
    _emit(corpus, out)


@app.command()
@reports_errors
def integrate(  # noqa: PLR0913
    invariant: InvariantName = "jones",
    external_cmd: ExternalCommand = None,
    base: BaseInvariant = "jones",
    budget: Budget = None,
    in_file: InFile = None,
    table: Table = None,
    out: OutFile = None,
    config_file: ConfigFile = None,
) -> None:
    """Integrate a singular invariant along a descending path to the unlink."""
    config = _config(config_file)
    d = _diagram(in_file, table).as_link()
    with closing(_singular_invariant(invariant, external_cmd, config)) as f:
        link_invariant, base_values = _base_values(f, d, base, config)
        value, path = integrate_with_path(f, d, base_values, _budget(budget, config))
    checks: tuple[Check, ...] = ()
    if isinstance(f, DerivedInvariant):
        direct = link_invariant.evaluate(d)
        checks = (
            Check(
                name="matches_direct_evaluation",
                ok=value == direct,
                detail=f"direct value {direct}",
            ),
        )
    report = Report(
        subject="integrate",
        checks=checks,
        witnesses=({"value": value.model_dump(mode="json"), "path": path.model_dump(mode="json")},),
    )
    logger.info(f"Integrated value {value} along {len(path.events)} events")
    _finish(report, out, ok=report.ok)


@app.command()
@reports_errors
def audit_loop(
    loop: Annotated[
        Path, typer.Option(exists=True, file_okay=True, dir_okay=False, help="Loop JSON file.")
    ],
    invariant: InvariantName = "jones",
    external_cmd: ExternalCommand = None,
    out: OutFile = None,
    config_file: ConfigFile = None,
) -> None:
    """Compute the defect of a singular invariant around a loop."""
    config = _config(config_file)
    path = HomotopyPath.model_validate_json(loop.read_text(encoding="utf-8"))
    with closing(_singular_invariant(invariant, external_cmd, config)) as f:
        report = loop_audit(f, path)
    _finish(report, out, ok=report.ok)


@app.command()
@reports_errors
def gen_loop(  # noqa: PLR0913
    kind: Annotated[LoopChoice, typer.Argument()],
    seed: Annotated[int, typer.Option(help="Random seed.")],
    crossings: Annotated[
        list[int] | None, typer.Option("--crossing", help="Commutator crossings, given twice.")
    ] = None,
    length: Annotated[int, typer.Option(min=0, help="Length of the conjugating path.")] = 3,
    count: Annotated[int, typer.Option(min=1, help="Loops in a composite loop.")] = 2,
    in_file: InFile = None,
    table: Table = None,
    out: OutFile = None,
) -> None:
    """Generate a loop of diagrams starting and ending at the given one."""
    start = _diagram(in_file, table).as_link()
    loop: LoopPath
    match kind:
        case LoopChoice.KINK:
            loop = gen_loop_kink(start, seed)
        case LoopChoice.COMMUTATOR:
            if crossings:
                if len(crossings) != 2:  # noqa: PLR2004
                    msg = f"A commutator loop needs two crossings, got {len(crossings)}"
                    raise ValueError(msg)
                c1, c2 = crossings
            else:
                ids = [c.id for c in start.crossings]
                if len(ids) < 2:  # noqa: PLR2004
                    msg = "A commutator loop needs a diagram with two crossings"
                    raise ValueError(msg)
                c1, c2 = random.Random(seed).sample(ids, 2)
            loop = gen_loop_commutator(start, c1, c2)
        case LoopChoice.CONJUGATED:
            loop = gen_loop_conjugated(start, seed, length)
        case LoopChoice.COMPOSITE:
            loop = gen_loop_composite(start, seed, count)
        case _ as unexpected_kind:
            assert_never(unexpected_kind)
    logger.info(f"Generated a {kind} loop of {len(loop.events)} events")
    _emit(loop, out)


@app.command()
@reports_errors
def path_independence(  # noqa: PLR0913
    seed: Annotated[int, typer.Option(help="Random seed.")],
    paths: Annotated[int, typer.Option("--paths", min=2, help="Number of paths.")] = 5,
    invariant: InvariantName = "jones",
    external_cmd: ExternalCommand = None,
    base: BaseInvariant = "jones",
    budget: Budget = None,
    workers: Workers = None,
    in_file: InFile = None,
    table: Table = None,
    out: OutFile = None,
    config_file: ConfigFile = None,
) -> None:
    """Integrate along several paths to the unlink and compare the values."""
    config = _config(config_file)
    d = _diagram(in_file, table).as_link()
    with closing(_singular_invariant(invariant, external_cmd, config)) as f:
        _, base_values = _base_values(f, d, base, config)
        report = path_independence_report(
            f,
            d,
            paths,
            seed,
            base_values,
            _budget(budget, config),
            _workers(workers, config),
        )
    logger.info(f"Compared {len(report.checks)} paths: ok={report.ok}")
    _finish(report, out, ok=report.ok)


@app.command()
@reports_errors
def write_config(
    out: Annotated[Path, typer.Option("--out", dir_okay=False, help="Write the YAML here.")],
    budget: Budget = None,
    workers: Workers = None,
    config_file: ConfigFile = None,
) -> None:
    """Write the effective configuration as YAML, overrides applied."""
    config = _config(config_file)
    effective = config.model_copy(
        update={"budget": _budget(budget, config), "workers": _workers(workers, config)}
    )
    save_config(effective, out)
    logger.info(f"Wrote the effective configuration to {out}")


@app.command()
def show_config_schema() -> None:
    """Show the JSON schema for the configuration file."""
    typer.echo(json.dumps(SkeinConfig.model_json_schema(), indent=2))


if __name__ == "__main__":
    app()
