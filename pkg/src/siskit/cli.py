"""Command-line front end: validate, priorities, score, whatif, report, serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .analysis import WhatIfError, apply_whatif, parse_patch
from .model import AssessmentModel, ModelError, load_model, validate_model
from .render import FORMATS, render_priorities, render_report, render_scores, render_whatif
from .scoring import ScoringError, model_priorities, score_model

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_ERROR = 2
EXIT_UNREADABLE = 3


def _load(input_path: str) -> AssessmentModel:
    try:
        text = Path(input_path).read_text()
    except OSError as exc:
        click.echo(f"cannot read {input_path}: {exc.strerror}", err=True)
        sys.exit(EXIT_UNREADABLE)
    try:
        from .model import parse_model

        return parse_model(text)
    except ModelError as exc:
        click.echo(f"ERROR {exc.path or '<document>'}: {exc.message}", err=True)
        sys.exit(EXIT_ERROR)


input_option = click.option(
    "--input", "-i", "input_path", required=True, type=click.Path(), help="Model document path."
)
format_option = click.option(
    "--format", "-f", "fmt", type=click.Choice(FORMATS), default="table", show_default=True
)
scenario_option = click.option("--scenario", default=None, help="Scenario id for priority overrides.")
decimals_option = click.option(
    "--decimals", type=click.IntRange(0, 6), default=2, show_default=True,
    help="Display rounding (half-up).",
)
raw_option = click.option(
    "--raw-priorities", is_flag=True, help="Score with unnormalized priorities."
)


@click.group()
def main():
    """Sustainability impact scoring for architecture alternatives."""


@main.command()
@input_option
@click.option("--strict", is_flag=True, help="Treat warnings as a failing condition.")
def validate(input_path, strict):
    """Check a model document; prints one diagnostic per line."""
    model = _load(input_path)
    diagnostics = validate_model(model)
    for diag in diagnostics:
        click.echo(str(diag))
    if any(d.level == "error" for d in diagnostics):
        sys.exit(EXIT_ERROR)
    if diagnostics and strict:
        sys.exit(EXIT_WARNINGS)
    sys.exit(EXIT_OK)


@main.command()
@input_option
@format_option
@scenario_option
@decimals_option
def priorities(input_path, fmt, scenario, decimals):
    """Print the per-QA priority table (I, R, P, NP, dimension)."""
    model = _load(input_path)
    try:
        pset = model_priorities(model, scenario)
    except ScoringError as exc:
        click.echo(f"ERROR: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(render_priorities(model, pset, fmt, decimals))


@main.command()
@input_option
@format_option
@scenario_option
@decimals_option
@raw_option
def score(input_path, fmt, scenario, decimals, raw_priorities):
    """Score all dimension pairs; raw block plus normalized percentages."""
    model = _load(input_path)
    try:
        results = score_model(model, scenario, use_raw_priorities=raw_priorities)
    except ScoringError as exc:
        click.echo(f"ERROR: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(render_scores(model, results, fmt, decimals))


@main.command()
@input_option
@click.argument("patch_path", type=click.Path())
@format_option
@scenario_option
@decimals_option
@raw_option
@click.option("--allow-optimal-edit", is_flag=True, help="Permit edits to the theoretical optimal.")
def whatif(input_path, patch_path, fmt, scenario, decimals, raw_priorities, allow_optimal_edit):
    """Apply a patch file of effect overrides and print old/new/delta scores."""
    model = _load(input_path)
    try:
        patch_doc = json.loads(Path(patch_path).read_text())
    except OSError as exc:
        click.echo(f"cannot read {patch_path}: {exc.strerror}", err=True)
        sys.exit(EXIT_UNREADABLE)
    except json.JSONDecodeError as exc:
        click.echo(f"ERROR: invalid patch JSON: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    try:
        patch = parse_patch(patch_doc)
        report = apply_whatif(
            model,
            patch,
            scenario=scenario,
            use_raw_priorities=raw_priorities,
            allow_optimal_edit=allow_optimal_edit,
        )
    except (WhatIfError, ScoringError, ModelError) as exc:
        click.echo(f"ERROR: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(render_whatif(model, report, fmt, decimals))


@main.command()
@input_option
@scenario_option
@decimals_option
@raw_option
def report(input_path, scenario, decimals, raw_priorities):
    """Emit the full Markdown report."""
    model = _load(input_path)
    try:
        pset = model_priorities(model, scenario)
        results = score_model(model, scenario, use_raw_priorities=raw_priorities)
    except ScoringError as exc:
        click.echo(f"ERROR: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(render_report(model, results, pset, decimals))


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--snapshot-dir", type=click.Path(), default=None,
    help="Write committed models to this directory.",
)
def serve(port, host, snapshot_dir):
    """Run the HTTP service for interactive what-if editing."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(snapshot_dir=snapshot_dir), host=host, port=port)


if __name__ == "__main__":
    main()
