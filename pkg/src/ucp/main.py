import logging

import click

from ucp import config
from ucp.commands import analysis, geometry, grid, transmission, validate

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@click.group()
@click.option(
    "--log-level",
    default=config.LOG_LEVEL,
    show_default=True,
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Logging threshold; overrides UCP_LOG_LEVEL.",
)
def cli(log_level):
    """Transmission through Unified Cantor Potentials."""
    logging.basicConfig(level=log_level.upper(), format=LOG_FORMAT, force=True)


# Register commands
cli.add_command(transmission.transmission)
cli.add_command(grid.grid)
cli.add_command(geometry.geometry)
cli.add_command(analysis.scaling)
cli.add_command(analysis.saturation)
cli.add_command(validate.validate)


def main():
    """Run the ucp command line."""
    cli()


if __name__ == "__main__":
    main()
