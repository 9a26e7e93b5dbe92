import logging
from importlib import metadata
from pathlib import Path
from typing import Annotated

import typer
from pydantic import ValidationError

from epidiff.config import list_presets
from epidiff.registry import list_suites
from epidiff.runner import ExitCode, RunSpec, run_cli
from epidiff.settings import settings
from epidiff.types import RunMode

PACKAGE_NAME = "epidiff"
PACKAGE_VERSION = metadata.version(PACKAGE_NAME)

app = typer.Typer(
    help=f"Solver and verification harness for the SIRS-B reaction-diffusion system, version {PACKAGE_VERSION}",
)


def _version_callback(value: bool) -> None:
    """Show the package version and exit."""
    if value:
        typer.echo(f"{PACKAGE_NAME} {PACKAGE_VERSION}")
        raise typer.Exit


def _list_presets_callback(value: bool) -> None:
    """List the shipped configuration presets."""
    if value:
        for name, description in list_presets().items():
            typer.echo(f"  - {name}: {description}")
        raise typer.Exit


def _list_suites_callback(value: bool) -> None:
    """List the verification suites run in verify mode."""
    if value:
        for name, description in list_suites().items():
            typer.echo(f"  - {name}: {description}")
        raise typer.Exit


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(capture=True)


@app.callback(invoke_without_command=True)
def root(
    version: Annotated[
        bool | None,
        typer.Option(
            "--version",
            help=_version_callback.__doc__,
            is_eager=True,
            callback=_version_callback,
        ),
    ] = None,
    list_presets_: Annotated[
        bool | None,
        typer.Option(
            "--list-presets",
            help=_list_presets_callback.__doc__,
            is_eager=True,
            callback=_list_presets_callback,
        ),
    ] = None,
    list_suites_: Annotated[
        bool | None,
        typer.Option(
            "--list-suites",
            help=_list_suites_callback.__doc__,
            is_eager=True,
            callback=_list_suites_callback,
        ),
    ] = None,
    mode: Annotated[
        RunMode | None,
        typer.Option(
            help="What to produce",
            show_default=True,
        ),
    ] = settings.mode,
    config: Annotated[
        Path | None,
        typer.Option(
            "--config",
            help="TOML run configuration",
        ),
    ] = None,
    preset: Annotated[
        str | None,
        typer.Option(
            "--preset",
            help="Shipped preset to use instead of --config",
        ),
    ] = None,
    output_dir: Annotated[
        Path | None,
        typer.Option(
            "--out",
            help="Directory for CSV files, snapshots and reports",
            show_default=True,
        ),
    ] = settings.output_dir,
    seed: Annotated[
        int | None,
        typer.Option(
            help="Base seed of the randomized verification runs",
            show_default=True,
        ),
    ] = settings.seed,
    threads: Annotated[
        int | None,
        typer.Option(
            help="Worker processes for seeds and sweep points",
            show_default=True,
        ),
    ] = settings.threads,
    cadence: Annotated[
        int | None,
        typer.Option(
            help="Write snapshots every this many steps",
            show_default=True,
        ),
    ] = settings.cadence,
    log_level: Annotated[
        str | None,
        typer.Option(
            "--log-level",
            help="Logging level",
            show_default=True,
        ),
    ] = settings.log_level,
) -> None:
    """Entry point of CLI."""
    try:
        settings.update(
            mode=mode,
            output_dir=output_dir,
            seed=seed,
            threads=threads,
            cadence=cadence,
            log_level=log_level,
        )
        spec = RunSpec(
            mode=settings.mode,
            config_path=config,
            preset=preset,
            output_dir=settings.output_dir,
            cadence=settings.cadence,
            seed=settings.seed,
            threads=settings.threads,
        )
    except ValidationError as exc:
        typer.echo(f"invalid invocation: {exc}", err=True)
        raise typer.Exit(code=ExitCode.CONFIGURATION_ERROR) from exc

    _configure_logging(settings.log_level)
    raise typer.Exit(code=int(run_cli(spec)))


def main() -> None:
    """Entry point of the application."""
    app()


if __name__ == "__main__":
    main()
