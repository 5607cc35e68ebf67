"""CLI app for running scenarios."""

import json
import logging
import sys
from typing import Optional

import click

from xmod.core import ParseError, config_override
from xmod.cstar.scenario import SAMPLES, Scenario, load_scenario, render_text, run

# pylint: disable=too-many-arguments

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _resolve(scenario: str) -> str:
    if scenario != "-" and scenario in SAMPLES:
        return str(SAMPLES[scenario])
    return scenario


def _setup_logging(verbose: int) -> None:
    if verbose > 0:
        level = logging.INFO if verbose == 1 else logging.DEBUG
        logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def _load(ctx: click.Context, scenario: str, output: str) -> Scenario:
    try:
        return load_scenario(_resolve(scenario))
    except FileNotFoundError:
        click.echo(f"Error: no such scenario: {scenario}", err=True)
        ctx.exit(EXIT_INPUT)
    except ParseError as e:
        if output == "json":
            doc = {"source": scenario, "passed": False, "error": e.to_dict()}
            click.echo(json.dumps(doc, indent=2, sort_keys=True))
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_INPUT)
    raise AssertionError("unreachable")


@click.group("xmod-cstar")
def main():
    """Crossed module actions on finite dimensional C*-algebras."""


@main.command("run")
@click.option("--tol", type=float, help="Tolerance for algebraic identities (1e-9)")
@click.option("--seed", type=int, help="Seed for randomized steps (0)")
@click.option("--max-dim", type=int, help="Largest accepted algebra dimension (1024)")
@click.option(
    "--output",
    "-o",
    type=click.Choice(["json", "text"]),
    default="json",
    help="Report format",
)
@click.option("--jobs", "-j", type=int, default=1, help="Run tasks on this many threads")
@click.option("--timing", is_flag=True, default=False, help="Record wall time per task")
@click.option("--verbose", "-v", count=True, help="Log to stderr, repeat for more detail")
@click.argument("scenario", type=str)
@click.pass_context
def run_cmd(
    ctx: click.Context,
    scenario: str,
    tol: Optional[float],
    seed: Optional[int],
    max_dim: Optional[int],
    output: str,
    jobs: int,
    timing: bool,
    verbose: int,
):
    """
    Run every task of a scenario and print the report.

    SCENARIO is a JSON file, the name of a shipped sample, or - for stdin.
    Exit status is 0 when all tasks pass, 1 when some verification fails and
    2 when the scenario cannot be parsed.
    """
    _setup_logging(verbose)
    with config_override(tol_alg=tol, seed=seed, max_dim=max_dim):
        scn = _load(ctx, scenario, output)
        report = run(scn, jobs=jobs, timing=timing)

    if output == "json":
        click.echo(report.to_json())
    else:
        click.echo(render_text(report))
    ctx.exit(report.exit_code)


@main.command("check")
@click.option("--tol", type=float, help="Tolerance for algebraic identities (1e-9)")
@click.option("--verbose", "-v", count=True, help="Log to stderr, repeat for more detail")
@click.argument("scenario", type=str)
@click.pass_context
def check(ctx: click.Context, scenario: str, tol: Optional[float], verbose: int):
    """
    Parse and validate a scenario without running its tasks.
    """
    _setup_logging(verbose)
    with config_override(tol_alg=tol):
        scn = _load(ctx, scenario, "text")
    for name in scn.declarations:
        click.echo(f"{scn.kinds[name]:>16} {name}")
    click.echo(f"{len(scn.tasks)} task(s): " + ", ".join(t.verb for t in scn.tasks))


@main.command("samples")
@click.option("--show", type=str, help="Print one sample scenario")
def samples(show: Optional[str]):
    """List shipped sample scenarios."""
    if show is not None:
        if show not in SAMPLES:
            raise click.ClickException(f"No such sample: {show}")
        click.echo(SAMPLES[show].read_text(encoding="utf8"))
        return
    click.echo("Sample scenarios:")
    for name in SAMPLES:
        click.echo(f"   {name}")
