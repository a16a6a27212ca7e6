"""Command-line interface for nckit.

Formulas are given on the command line, models, frames and proofs in files.
Every command answers a question; the exit code carries the answer:
0 yes, 1 no, 2 usage or input error, 3 budget exceeded.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Iterable, Mapping
from pathlib import Path
from typing import Any, TypeVar

import click
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from .__version__ import __version__
from .core.bisim import BisimKind, contract, largest_bisimulation
from .core.config_manager import LOG_LEVELS, ConfigManager, Settings
from .core.decorators import EXIT_USAGE, with_exit_codes
from .core.exceptions import NckitError
from .core.formula import Formula, LanguageTag, parse
from .core.kripke import Frame, FrameProperty, Model, disjoint_union
from .core.proof import check_script, load_script
from .core.sat import satisfiable
from .core.semantics import (
    definable_closure,
    entails_on_frame,
    satisfies,
    truth_set,
    valid_on_frame,
)
from .core.translate import to_blacktri, to_box, to_circ
from .core.ui import console, err_console, progress_bar
from .types.result_types import Countermodel, to_jsonable
from .utils.model_io import dump_model, load_frame, load_model


logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

_TRANSLATIONS: dict[str, Callable[[Formula], Formula]] = {
    "box": to_box,
    "tri": to_blacktri,
    "circ": to_circ,
}


def setup_logging(level: str) -> None:
    """Setup logging configuration.

    Args:
        level: Logging level
    """
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
    )


def _settings(ctx: click.Context) -> Settings:
    return ctx.obj["config_manager"].settings


def _emit(document: Mapping[str, Any]) -> None:
    """Print a JSON report with sorted keys, so identical runs print identical bytes."""
    click.echo(json.dumps(to_jsonable(document), indent=2, sort_keys=True, ensure_ascii=False))


def _answer(title: str, holds: bool, detail: str = "") -> None:
    color = "green" if holds else "red"
    word = "YES" if holds else "NO"
    body = f"[{color}]{word}[/{color}]"
    if detail:
        body += f"\n{escape(detail)}"
    console.print(Panel(body, title=escape(title)))


def _format_valuation(valuation: Mapping[str, Iterable[str]]) -> str:
    parts = [
        f"V({atom})={{{','.join(sorted(worlds))}}}" for atom, worlds in sorted(valuation.items())
    ]
    return ", ".join(parts) if parts else "(no atoms)"


def _format_countermodel(countermodel: Countermodel | None) -> str:
    if countermodel is None:
        return ""
    return f"fails at {countermodel.world} under {_format_valuation(countermodel.valuation)}"


def _display_model(model: Model, title: str) -> None:
    table = Table(title=escape(title))
    table.add_column("World", style="cyan")
    table.add_column("Successors")
    table.add_column("True atoms", style="green")
    for world in model.worlds:
        successors = [w for w in model.worlds if w in model.successors(world)]
        table.add_row(
            escape(world),
            escape(", ".join(successors)),
            escape(", ".join(sorted(model.label(world)))),
        )
    console.print(table)


def json_option(f: F) -> F:
    """Shared ``--json`` flag."""
    return click.option("--json", "as_json", is_flag=True, help="Print a JSON report")(f)


def formula_option(f: F) -> F:
    """Shared ``-f/--formula`` option."""
    return click.option("-f", "--formula", "formula_text", required=True, help="Formula")(f)


_MODEL_PATH = click.Path(exists=True, dir_okay=False, path_type=Path)


@click.group()
@click.option(
    "--log-level",
    default=None,
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    help="Set logging level (default from settings: WARNING)",
)
@click.option(
    "--config",
    "config_file",
    type=_MODEL_PATH,
    help="YAML settings file (default: ./nckit.yaml if present)",
)
@click.version_option(version=__version__, prog_name="nckit")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None, config_file: Path | None) -> None:
    """nckit - model checking, bisimulation and proofs for strong noncontingency logic."""
    try:
        config_manager = ConfigManager(config_file)
    except NckitError as e:
        err_console.print(f"[red]Error:[/red] {escape(str(e))}")
        ctx.exit(EXIT_USAGE)
    setup_logging(log_level or config_manager.settings.log_level)

    ctx.ensure_object(dict)
    ctx.obj["config_manager"] = config_manager


@cli.command()
@click.option("-m", "--model", "model_path", type=_MODEL_PATH, required=True, help="Model file")
@click.option("-w", "--world", required=True, help="World to evaluate at")
@formula_option
@json_option
@click.pass_context
@with_exit_codes
def check(
    ctx: click.Context, model_path: Path, world: str, formula_text: str, as_json: bool
) -> bool:
    """Decide M, w |= formula."""
    model = load_model(model_path)
    formula = parse(formula_text)
    holds = satisfies(model, world, formula)
    if as_json:
        _emit(
            {
                "command": "check",
                "formula": formula,
                "world": world,
                "holds": holds,
                "truth_set": truth_set(model, formula),
            },
        )
    else:
        _answer(f"{model_path.name}, {world} |= {formula}", holds)
    return holds


@cli.command("valid-model")
@click.option("-m", "--model", "model_path", type=_MODEL_PATH, required=True, help="Model file")
@formula_option
@json_option
@click.pass_context
@with_exit_codes
def valid_model(ctx: click.Context, model_path: Path, formula_text: str, as_json: bool) -> bool:
    """Decide whether the formula holds at every world of a model."""
    model = load_model(model_path)
    formula = parse(formula_text)
    failing = sorted(set(model.worlds) - truth_set(model, formula), key=model.index_of)
    valid = not failing
    if as_json:
        _emit(
            {
                "command": "valid-model",
                "formula": formula,
                "valid": valid,
                "failing_worlds": failing,
            },
        )
    else:
        _answer(
            f"{model_path.name} |= {formula}",
            valid,
            "" if valid else f"fails at {', '.join(failing)}",
        )
    return valid


@cli.command("valid-frame")
@click.option("-F", "--frame", "frame_path", type=_MODEL_PATH, required=True, help="Frame file")
@formula_option
@click.option("--budget", type=click.IntRange(min=1), help="Valuation enumeration cap")
@json_option
@click.pass_context
@with_exit_codes
def valid_frame(
    ctx: click.Context,
    frame_path: Path,
    formula_text: str,
    budget: int | None,
    as_json: bool,
) -> bool:
    """Decide frame validity by enumerating valuations of the formula's atoms."""
    frame = load_frame(frame_path)
    formula = parse(formula_text)
    result = valid_on_frame(frame, formula, budget=budget or _settings(ctx).valuation_budget)
    if as_json:
        _emit({"command": "valid-frame", "formula": formula, **to_jsonable(result)})
    else:
        _answer(
            f"{frame_path.name} |= {formula}",
            result.valid,
            _format_countermodel(result.countermodel),
        )
    return result.valid


@cli.command()
@click.option("-F", "--frame", "frame_path", type=_MODEL_PATH, required=True, help="Frame file")
@click.option("-g", "--premise", "premises", multiple=True, help="Premise formula (repeatable)")
@formula_option
@click.option("--budget", type=click.IntRange(min=1), help="Valuation enumeration cap")
@json_option
@click.pass_context
@with_exit_codes
def entails(
    ctx: click.Context,
    frame_path: Path,
    premises: tuple[str, ...],
    formula_text: str,
    budget: int | None,
    as_json: bool,
) -> bool:
    """Decide whether the premises entail the formula over a frame."""
    frame = load_frame(frame_path)
    gamma = [parse(text) for text in premises]
    formula = parse(formula_text)
    budget = budget or _settings(ctx).valuation_budget
    result = entails_on_frame(frame, gamma, formula, budget=budget)
    if as_json:
        _emit({"command": "entails", "premises": gamma, "formula": formula, **to_jsonable(result)})
    else:
        title = f"{', '.join(str(g) for g in gamma) or '{}'} |= {formula} over {frame_path.name}"
        _answer(title, result.valid, _format_countermodel(result.countermodel))
    return result.valid


@cli.command()
@formula_option
@click.option(
    "--to",
    "target",
    type=click.Choice(sorted(_TRANSLATIONS)),
    default="box",
    show_default=True,
    help="Target language",
)
@json_option
@click.pass_context
@with_exit_codes
def translate(ctx: click.Context, formula_text: str, target: str, as_json: bool) -> None:
    """Translate a formula into L(box), L(tri) or L(circ)."""
    formula = parse(formula_text)
    result = _TRANSLATIONS[target](formula)
    if as_json:
        _emit({"command": "translate", "to": target, "input": formula, "output": result})
    else:
        click.echo(str(result))


@cli.command()
@click.option("-m", "--model", "left_path", type=_MODEL_PATH, required=True, help="First model")
@click.option("-w", "--world", "left_world", required=True, help="World of the first model")
@click.option("-n", "--other", "right_path", type=_MODEL_PATH, required=True, help="Second model")
@click.option("-x", "--other-world", "right_world", required=True, help="World of the second model")
@click.option(
    "--kind",
    type=click.Choice([kind.value for kind in BisimKind]),
    default=BisimKind.BLACKTRI.value,
    show_default=True,
    help="Bisimulation clauses",
)
@json_option
@click.pass_context
@with_exit_codes
def bisim(
    ctx: click.Context,
    left_path: Path,
    left_world: str,
    right_path: Path,
    right_world: str,
    kind: str,
    as_json: bool,
) -> bool:
    """Decide bisimilarity of two pointed models via the largest bisimulation."""
    left, right = load_model(left_path), load_model(right_path)
    bisimilarity = largest_bisimulation(left, right, BisimKind(kind))
    related = bisimilarity.relates(left_world, right_world)
    witness: Formula | None = None
    if not related:
        language = LanguageTag.BOX if kind == BisimKind.BOX.value else LanguageTag.BLACKTRI
        family = definable_closure(bisimilarity.union, language=language)
        witness = family.separating_formula(
            bisimilarity.left[left_world], bisimilarity.right[right_world]
        )
    if as_json:
        _emit(
            {
                "command": "bisim",
                "bisimilar": related,
                "relation": bisimilarity,
                "distinguishing_formula": witness,
            },
        )
    else:
        detail = f"{len(bisimilarity.cross_pairs)} related pairs across the models"
        if witness is not None:
            detail += f"; distinguished by {witness}"
        _answer(f"{left_world} ~{kind} {right_world}", related, detail)
    return related


@cli.command("contract")
@click.option("-m", "--model", "model_path", type=_MODEL_PATH, required=True, help="Model file")
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False, path_type=Path), help="Write the result model"
)
@json_option
@click.pass_context
@with_exit_codes
def contract_command(
    ctx: click.Context, model_path: Path, output: Path | None, as_json: bool
) -> None:
    """Quotient a model by strong-noncontingency bisimilarity."""
    model = load_model(model_path)
    contracted, block_of = contract(model)
    if output is not None:
        dump_model(contracted, output)
    if as_json:
        _emit({"command": "contract", "model": contracted, "block_of": block_of})
    else:
        sizes = f"{model.frame.size} -> {contracted.frame.size} worlds"
        title = f"{model_path.name} contracted ({sizes})"
        _display_model(contracted, title)


@cli.command()
@click.option("-m", "--model", "model_path", type=_MODEL_PATH, required=True, help="Model file")
@click.option("-w", "--world", "first", required=True, help="First world")
@click.option("-x", "--other-world", "second", required=True, help="Second world")
@click.option("-n", "--other", "other_path", type=_MODEL_PATH, help="Model of the second world")
@click.option(
    "--lang",
    type=click.Choice([tag.value for tag in LanguageTag]),
    default=LanguageTag.BLACKTRI.value,
    show_default=True,
    help="Sublanguage",
)
@click.option("--atoms", help="Comma separated atoms (default: all atoms of the models)")
@json_option
@click.pass_context
@with_exit_codes
def equiv(
    ctx: click.Context,
    model_path: Path,
    first: str,
    second: str,
    other_path: Path | None,
    lang: str,
    atoms: str | None,
    as_json: bool,
) -> bool:
    """Decide whether two worlds satisfy the same formulas of a sublanguage."""
    model = load_model(model_path)
    left, right = first, second
    if other_path is not None:
        other = load_model(other_path)
        model.index_of(first)
        other.index_of(second)
        model, inject_left, inject_right = disjoint_union(model, other)
        left, right = inject_left[first], inject_right[second]
    model.index_of(left)
    model.index_of(right)
    atom_list = [a.strip() for a in atoms.split(",") if a.strip()] if atoms else None
    family = definable_closure(model, atom_list, LanguageTag(lang))
    equivalent = not family.separates(left, right)
    witness = None if equivalent else family.separating_formula(left, right)
    if as_json:
        _emit(
            {
                "command": "equiv",
                "language": lang,
                "equivalent": equivalent,
                "blocks": family.blocks,
                "distinguishing_formula": witness,
            },
        )
    else:
        detail = f"{len(family.blocks)} definable blocks"
        if witness is not None:
            detail += f"; true at {left}, false at {right}: {witness}"
        _answer(f"{left} ={lang} {right}", equivalent, detail)
    return equivalent


@cli.command()
@click.argument("script_path", type=_MODEL_PATH)
@click.option("--system", help="Axiom system (overrides the script header)")
@json_option
@click.pass_context
@with_exit_codes
def prove(ctx: click.Context, script_path: Path, system: str | None, as_json: bool) -> bool:
    """Check a proof script line by line."""
    script = load_script(script_path, system=system)
    report = check_script(script, max_atoms=_settings(ctx).truth_table_max_atoms)
    if as_json:
        _emit({"command": "prove", **to_jsonable(report)})
        return report.ok

    table = Table(title=escape(f"{script_path.name} in {report.system}"))
    table.add_column("Line", style="cyan", justify="right")
    table.add_column("Formula")
    table.add_column("Rule")
    table.add_column("Status", style="bold")
    for line, verdict in zip(script.lines, report.verdicts, strict=True):
        kind = verdict.kind.value if verdict.kind else "rejected"
        status = "[green]ok[/green]" if verdict.ok else f"[red]{kind}[/red]"
        table.add_row(
            str(line.index), escape(str(line.formula)), escape(str(line.justification)), status
        )
    console.print(table)
    for verdict in report.rejected:
        console.print(f"[red]line {verdict.index}:[/red] {escape(verdict.reason)}")
    return report.ok


@cli.command()
@formula_option
@click.option(
    "--class",
    "frame_class",
    default="",
    help="Comma separated frame properties, e.g. reflexive,euclidean",
)
@click.option("--max-worlds", type=click.IntRange(min=1), help="Largest model size to try")
@click.option("--budget", type=click.IntRange(min=1), help="Candidate model cap")
@json_option
@click.pass_context
@with_exit_codes
def sat(
    ctx: click.Context,
    formula_text: str,
    frame_class: str,
    max_worlds: int | None,
    budget: int | None,
    as_json: bool,
) -> bool:
    """Search for a finite pointed model of a formula."""
    settings = _settings(ctx)
    formula = parse(formula_text)
    properties = FrameProperty.parse_list(frame_class)
    with progress_bar(enabled=not as_json) as progress:
        task = progress.add_task("Searching models", total=None)

        def report_size(size: int, bound: int) -> None:
            progress.update(
                task, description=f"{size}-world models", completed=size - 1, total=bound
            )

        result = satisfiable(
            formula,
            properties,
            max_worlds or settings.default_max_worlds,
            node_budget=budget or settings.sat_node_budget,
            progress=report_size,
        )
    if as_json:
        _emit({"command": "sat", "formula": formula, **to_jsonable(result)})
    elif result.model is not None:
        _answer(f"sat {formula}", True, f"satisfied at {result.world}")
        _display_model(result.model, "Model")
    else:
        _answer(
            f"sat {formula}",
            False,
            f"{result.outcome.value} (searched up to {result.bound} worlds, "
            f"{result.candidates_examined} candidates)",
        )
    return result.satisfiable


@cli.command("frame-props")
@click.option("-F", "--frame", "frame_path", type=_MODEL_PATH, required=True, help="Frame file")
@json_option
@click.pass_context
@with_exit_codes
def frame_props(ctx: click.Context, frame_path: Path, as_json: bool) -> None:
    """Report which frame properties hold, with a violating tuple for each that fails."""
    frame: Frame = load_frame(frame_path)
    checks = frame.properties()
    if as_json:
        _emit({"command": "frame-props", "frame": frame, "properties": list(checks.values())})
        return

    table = Table(title=escape(f"Properties of {frame_path.name}"))
    table.add_column("Property", style="cyan")
    table.add_column("Holds", style="bold")
    table.add_column("Witness")
    for prop, check in checks.items():
        holds = "[green]yes[/green]" if check.holds else "[red]no[/red]"
        witness = ", ".join(check.witness) if check.witness else ""
        table.add_row(prop.value, holds, escape(f"({witness})" if witness else ""))
    console.print(table)


def main() -> None:
    """Console script entry point."""
    cli(obj={})


if __name__ == "__main__":
    main()
