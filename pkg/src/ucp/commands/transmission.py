import click

from ucp.analysis.analysis import log_opacity
from ucp.commands.options import (
    SPEC_DEFAULTS,
    grid_options,
    handle_errors,
    merge_settings,
    open_output,
    run_options,
    spec_options,
)
from ucp.config import dump_config_file
from ucp.output.output import spec_header, write_csv
from ucp.schemas.schemas import SweepConfig
from ucp.sweep.sweep import run_transmission_sweep

DEFAULTS = {**SPEC_DEFAULTS, "kmin": 0.2, "kmax": 50.0, "nk": 200, "scale": "log", "engine": "closed_form"}


@click.command("transmission")
@spec_options
@grid_options
@click.option("--engine", type=click.Choice(["closed_form", "oracle", "both"]), help="Transmission engine.")
@click.option("--opacity", is_flag=True, help="Append a log10_opacity column, log10(-log10 T).")
@run_options
@click.option(
    "--dump-config",
    type=click.Path(dir_okay=False),
    help="Write the effective configuration as JSON before running.",
)
@handle_errors
def transmission(config_path, dump_config, opacity, **flags):
    """Sweep T(k) over a wavenumber grid and write CSV rows k,T,R,log10_T."""
    sweep_config = SweepConfig.from_flat(merge_settings(config_path, flags, DEFAULTS))
    if dump_config:
        dump_config_file(sweep_config.to_flat(), dump_config)
    rows = run_transmission_sweep(sweep_config)

    header = {
        **spec_header(sweep_config.spec),
        "kmin": sweep_config.k_min,
        "kmax": sweep_config.k_max,
        "nk": sweep_config.n_k,
        "scale": sweep_config.scale,
        "engine": sweep_config.engine,
    }
    columns = ["k", "T", "R", "log10_T"]
    body = [[row.k, row.transmission, row.reflection, row.log10_transmission] for row in rows]
    footer = None
    if sweep_config.engine == "both":
        columns += ["T_oracle", "abs_diff"]
        footer = {"max_abs_diff": max(row.abs_diff for row in rows)}
        for line, row in zip(body, rows):
            line += [row.oracle_transmission, row.abs_diff]
    if opacity:
        columns.append("log10_opacity")
        for line, row in zip(body, rows):
            line.append(log_opacity(row))

    with open_output(sweep_config.out) as stream:
        write_csv(stream, header, columns, body, footer)
