"""
Command-line interface for the polarsym workbench.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click

from .. import __version__
from ..config import DEFAULT_LIMITS, Limits
from ..errors import PolarSymError
from .commands import (
    Method,
    OutputFormat,
    RunConfig,
    cmd_count,
    cmd_enumerate,
    cmd_table,
    cmd_validate_channel,
    cmd_verify,
    parse_a_prime,
)
from .reports import render
from .suites import SUITES

log = logging.getLogger("polarsym")

DEFAULT_MAX_DOMAIN = 1 << 22
DEFAULT_MAX_ROW_SPACE = 1 << 20


def _setup_logging(verbosity: int):
    from rich.console import Console
    from rich.logging import RichHandler

    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(level)
    log.propagate = False


def run_options(func: Callable) -> Callable:
    """Options shared by every subcommand that runs on a channel and block length."""
    options = [
        click.option("--channel", "channel_spec", required=True,
                     help="bsc:<p>, bec:<eps> or a channel JSON file"),
        click.option("--n", "n", type=int, required=True, help="Block length N, a power of two"),
        click.option("--i", "indices", default="all", show_default=True,
                     help="Bit index, range a-b, comma list or 'all'"),
        click.option("--method", type=click.Choice([m.value for m in Method]), default="both",
                     show_default=True, help="Counting path(s) to run"),
        click.option("--a-prime", "a_prime", default="auto", show_default=True,
                     help="Reduction a': auto, sqrt or a power of two"),
        click.option("--max-domain", type=int, default=DEFAULT_MAX_DOMAIN, show_default=True,
                     envvar="POLARSYM_MAX_DOMAIN", help="Largest brute-force domain"),
        click.option("--max-row-space", type=int, default=DEFAULT_MAX_ROW_SPACE, show_default=True,
                     envvar="POLARSYM_MAX_ROW_SPACE", help="Largest row space summed over"),
        click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
                     envvar="POLARSYM_WORKERS", help="Worker processes for enumeration"),
        click.option("--seed", type=int, default=0, show_default=True,
                     help="Seed for sampled verification"),
        click.option("--samples", type=click.IntRange(min=1), default=200, show_default=True,
                     help="Sample size when verification is not exhaustive"),
        click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path),
                     default=None, help="Write the report to a file instead of stdout"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _format_option(default: str) -> Callable:
    return click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]),
                        default=default, show_default=True, help="Report format")


def _build_config(
    channel_spec: str,
    n: int,
    indices: str,
    method: str,
    a_prime: str,
    max_domain: int,
    max_row_space: int,
    workers: int,
    seed: int,
    samples: int,
    **extra: Any,
) -> RunConfig:
    try:
        limits = Limits(
            max_matrix_size=DEFAULT_LIMITS.max_matrix_size,
            max_row_space=max_row_space,
            max_domain=max_domain,
        )
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    return RunConfig.build(
        channel_spec,
        n,
        indices,
        method=Method(method),
        limits=limits,
        workers=workers,
        seed=seed,
        samples=samples,
        a_prime=parse_a_prime(a_prime),
        **extra,
    )


def _emit(report: dict[str, Any], fmt: str, output: Optional[Path]):
    text = render(report, OutputFormat(fmt))
    if output is None:
        click.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")
        log.info("wrote %s", output)
    if report["failures"]:
        sys.exit(1)


def _run(builder: Callable[[], dict[str, Any]], fmt: str, output: Optional[Path]):
    try:
        report = builder()
    except PolarSymError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(report, fmt, output)


@click.group()
@click.version_option(__version__, prog_name="polarsym")
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug output")
def main(verbose: int):
    """Exact split-channel probabilities and equivalence-class counts for polar codes."""
    _setup_logging(verbose)


@main.command()
@run_options
@_format_option("json")
def count(fmt: str, output: Optional[Path], **kwargs: Any):
    """Closed-form and brute-force class counts per bit index."""
    _run(lambda: cmd_count(_build_config(fmt=OutputFormat(fmt), **kwargs)), fmt, output)


@main.command("enumerate")
@run_options
@_format_option("json")
def enumerate_classes_cmd(fmt: str, output: Optional[Path], **kwargs: Any):
    """List every equivalence class with its probability and a representative."""
    _run(lambda: cmd_enumerate(_build_config(fmt=OutputFormat(fmt), **kwargs)), fmt, output)


@main.command()
@run_options
@_format_option("json")
@click.option("--suite", "suites", multiple=True, default=("all",), show_default=True,
              type=click.Choice(["all", *SUITES]), help="Suite to run (repeatable)")
def verify(fmt: str, output: Optional[Path], suites: tuple[str, ...], **kwargs: Any):
    """Check the symmetry results against brute force."""
    names = tuple(SUITES) if "all" in suites else tuple(dict.fromkeys(suites))
    _run(lambda: cmd_verify(_build_config(fmt=OutputFormat(fmt), suites=names, **kwargs)), fmt, output)


@main.command()
@run_options
@_format_option("csv")
def table(fmt: str, output: Optional[Path], **kwargs: Any):
    """Class counts for i = N - a, a = N, N/2, ..., 1, next to the naive bound."""
    _run(lambda: cmd_table(_build_config(fmt=OutputFormat(fmt), **kwargs)), fmt, output)


@main.command("validate-channel")
@click.argument("channel_spec")
@_format_option("text")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None)
def validate_channel(channel_spec: str, fmt: str, output: Optional[Path]):
    """Check a channel definition and show its alphabet partition."""
    _run(lambda: cmd_validate_channel(channel_spec), fmt, output)


if __name__ == "__main__":
    main()
