"""Command-line interface."""
from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from .config import AnalysisConfig, InputSpec, parse_input_spec
from .errors import FldxError
from .numerics import FORMATS
from .pipeline import STAGES, StageError, analyze, instrumented_source
from .report import REPORT_SCHEMA

#: exit codes: 0 clean, 1 alarms found, then one per failing stage
_STAGE_EXIT = {stage: i + 2 for i, stage in enumerate(STAGES)}


def _build_config(fmt, inputs, entry, max_noise, path_budget, subdiv,
                  threshold, trace, no_instrument) -> AnalysisConfig:
    cfg = AnalysisConfig(fmt=FORMATS[fmt])
    for spec in inputs:
        name, parsed = parse_input_spec(spec)
        if isinstance(parsed, InputSpec):
            cfg.inputs[name] = parsed
        elif isinstance(parsed, tuple):
            cfg.array_inputs[name] = parsed
        else:
            cfg.int_inputs[name] = parsed
    cfg.entry = entry
    cfg.max_syms = max_noise
    cfg.path_budget = path_budget
    cfg.subdiv = subdiv
    cfg.threshold = Fraction(threshold).limit_denominator(10**9)
    cfg.collect_trace = trace
    cfg.auto_instrument = not no_instrument
    return cfg


_shared = [
    click.option("--format", "fmt", default="binary64",
                 type=click.Choice(sorted(FORMATS)), show_default=True,
                 help="Floating-point format of machine operations."),
    click.option("--input", "inputs", multiple=True, metavar="NAME=SPEC",
                 help="Bind an input: x=[lo,hi], x=[lo,hi]~[elo,ehi],"
                      " n=3, or t={0.0,1.0,2.0}."),
    click.option("--entry", default=None, help="Entry function."),
    click.option("--max-noise", default=64, show_default=True,
                 help="Noise symbols kept per affine form."),
    click.option("--path-budget", default=256, show_default=True,
                 help="Execution paths explored per section."),
    click.option("--subdiv", default=1, show_default=True,
                 help="Input subdivisions."),
    click.option("--threshold", default="0.05", show_default=True,
                 help="Minimal width improvement for constraint adoption."),
    click.option("--trace", is_flag=True, help="Record a decision trace."),
    click.option("--no-instrument", is_flag=True,
                 help="Do not auto-place split/merge sections."),
]


def _with_shared(f):
    for opt in reversed(_shared):
        f = opt(f)
    return f


@click.group()
@click.version_option()
def main() -> None:
    """Floating-point accuracy analyzer for a mini-C subset."""


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@_with_shared
@click.option("--report", "report_fmt", default="text",
              type=click.Choice(["text", "json"]), show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False),
              default=None, help="Write the report to a file.")
def analyze_cmd(source, fmt, inputs, entry, max_noise, path_budget, subdiv,
                threshold, trace, no_instrument, report_fmt, output):
    """Analyze SOURCE and report accuracy verdicts."""
    cfg = _build_config(fmt, inputs, entry, max_noise, path_budget, subdiv,
                        threshold, trace, no_instrument)
    try:
        rep = analyze(Path(source).read_text(), cfg, source_name=source)
    except StageError as exn:
        click.echo(f"error: {exn}", err=True)
        sys.exit(_STAGE_EXIT[exn.stage])
    except FldxError as exn:
        click.echo(f"error: {exn}", err=True)
        sys.exit(_STAGE_EXIT["execute"])
    text = rep.to_json() if report_fmt == "json" else rep.to_text()
    if output:
        Path(output).write_text(text + "\n")
    else:
        click.echo(text)
    sys.exit(1 if rep.has_alarms else 0)


main.add_command(analyze_cmd, name="analyze")


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@_with_shared
@click.option("--output", "-o", type=click.Path(dir_okay=False),
              default=None, help="Write the instrumented source to a file.")
def instrument(source, fmt, inputs, entry, max_noise, path_budget, subdiv,
               threshold, trace, no_instrument, output):
    """Print SOURCE with split/merge sections placed."""
    cfg = _build_config(fmt, inputs, entry, max_noise, path_budget, subdiv,
                        threshold, trace, no_instrument)
    try:
        text = instrumented_source(Path(source).read_text(), cfg)
    except StageError as exn:
        click.echo(f"error: {exn}", err=True)
        sys.exit(_STAGE_EXIT[exn.stage])
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command()
def schema():
    """Print the JSON schema of analysis reports."""
    click.echo(json.dumps(REPORT_SCHEMA, indent=2))


@main.command()
@click.option("--runs", default=3, show_default=True)
def bench(runs):
    """Time the analyzer on the bundled example programs."""
    from .bench import run_bench
    run_bench(runs)


if __name__ == "__main__":
    main()
