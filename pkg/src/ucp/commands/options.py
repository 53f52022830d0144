import functools
from pathlib import Path

import click
from pydantic import ValidationError

from ucp.config import load_config_file
from ucp.errors import UcpError

SPEC_DEFAULTS = {"L": 10.0, "V": 25.0, "rho": 3.0, "alpha": 1.0, "beta": 0.0, "G": 3}


def spec_options(function):
    """Attach --L --V --rho --alpha --beta --G; unset flags stay None so config files can fill them."""
    options = [
        click.option("--L", "L", type=float, help="Total span of the potential."),
        click.option("--V", "V", type=float, help="Barrier height."),
        click.option("--rho", type=float, help="Scaling parameter (> 1)."),
        click.option("--alpha", type=float, help="Constant part of the removal exponent."),
        click.option("--beta", type=float, help="Stage-proportional part of the removal exponent."),
        click.option("--G", "G", type=int, help="Stage."),
    ]
    for option in reversed(options):
        function = option(function)
    return function


def grid_options(function):
    options = [
        click.option("--kmin", type=float, help="Smallest wavenumber."),
        click.option("--kmax", type=float, help="Largest wavenumber."),
        click.option("--nk", type=int, help="Number of wavenumbers."),
        click.option("--scale", type=click.Choice(["linear", "log"]), help="Spacing of the k grid."),
    ]
    for option in reversed(options):
        function = option(function)
    return function


def output_options(function):
    options = [
        click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Output file (default: stdout)."),
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="Flat key=value or JSON file mirroring the flags.",
        ),
    ]
    for option in reversed(options):
        function = option(function)
    return function


def run_options(function):
    function = output_options(function)
    return click.option("--workers", type=int, help="Worker processes (default: available parallelism).")(function)


def merge_settings(config_path, flags, defaults):
    """Defaults, then the config file, then explicit flags."""
    values = dict(defaults)
    if config_path is not None:
        values.update(load_config_file(config_path))
    values.update({key: value for key, value in flags.items() if value is not None})
    return values


def describe_validation_error(exc):
    messages = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"])
        message = error["msg"].removeprefix("Value error, ")
        messages.append(f"{location}: {message}" if location else message)
    return "; ".join(messages)


def handle_errors(function):
    """Map validation and domain errors onto exit codes with a message on stderr."""

    @functools.wraps(function)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return function(*args, **kwargs)
        except ValidationError as exc:
            click.echo(f"Error: invalid spec: {describe_validation_error(exc)}", err=True)
            ctx.exit(2)
        except UcpError as exc:
            click.echo(f"Error: {exc.detail}", err=True)
            ctx.exit(exc.exit_code)

    return wrapper


def open_output(out):
    return click.open_file(str(out) if out is not None else "-", "w", encoding="utf-8")
