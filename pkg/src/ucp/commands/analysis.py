import click

from ucp import config
from ucp.analysis.analysis import (
    SCALING_METHODS,
    constant_area_height,
    fit_scaling_all,
    saturation_scan,
    stage_specs,
)
from ucp.commands.options import (
    SPEC_DEFAULTS,
    grid_options,
    handle_errors,
    merge_settings,
    open_output,
    run_options,
    spec_options,
)
from ucp.output.output import write_json
from ucp.schemas.schemas import SweepConfig, UcpSpec

SPEC_KEYS = ("L", "V", "rho", "alpha", "beta", "G")


def _spec(values):
    return UcpSpec(**{key: values[key] for key in SPEC_KEYS})


@click.command("scaling")
@spec_options
@grid_options
@click.option("--V0", "V0", type=float, help="Reference height; defaults to --V.")
@click.option(
    "--method",
    type=click.Choice(list(SCALING_METHODS)),
    default="envelope",
    show_default=True,
    help="Fit reported under `fit`; every method is listed under `fits`.",
)
@run_options
@handle_errors
def scaling(config_path, V0, method, **flags):
    """Fit the large-k power law of the constant-area reflection and print it as JSON."""
    values = merge_settings(config_path, flags, {**SPEC_DEFAULTS, "kmin": 50.0, "kmax": 500.0, "nk": 400})
    spec = _spec(values)
    V0 = spec.V if V0 is None else V0
    workers = config.WORKERS if values.get("workers") is None else int(values["workers"])
    fits = fit_scaling_all(
        spec,
        V0,
        (float(values["kmin"]), float(values["kmax"])),
        int(values["nk"]),
        workers=workers,
    )
    payload = {
        "spec": spec.model_dump(),
        "V0": V0,
        "V_G": constant_area_height(spec, V0),
        "fit": fits[method].model_dump(),
        "fits": {name: fit.model_dump() for name, fit in fits.items()},
    }
    with open_output(values.get("out")) as stream:
        write_json(stream, payload)


@click.command("saturation")
@spec_options
@grid_options
@click.option("--G-min", "G_min", type=int, default=3, show_default=True, help="First stage of the scan.")
@click.option("--G-max", "G_max", type=int, default=9, show_default=True, help="Last stage of the scan.")
@click.option("--V0", "V0", type=float, help="Compare log10 R at constant-area heights for this reference height.")
@run_options
@handle_errors
def saturation(config_path, G_min, G_max, V0, **flags):
    """Sup-norm change of log10 T (or log10 R with --V0) between consecutive stages, as JSON."""
    defaults = {**SPEC_DEFAULTS, "kmin": 0.5, "kmax": 10.0, "nk": 400, "scale": "linear"}
    values = merge_settings(config_path, flags, defaults)
    sweep_config = SweepConfig.from_flat({**values, "G": G_min})
    specs = stage_specs(sweep_config.spec, range(G_min, G_max + 1))
    report = saturation_scan(specs, sweep_config.k_grid(), workers=sweep_config.workers, V0=V0)
    payload = {**report.model_dump(), "strictly_decreasing": report.is_strictly_decreasing()}
    with open_output(sweep_config.out) as stream:
        write_json(stream, payload)
