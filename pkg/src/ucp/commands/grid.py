import click

from ucp.commands.options import handle_errors, merge_settings, open_output, run_options
from ucp.output.output import write_csv
from ucp.schemas.schemas import GridAxis, GridConfig
from ucp.sweep.sweep import run_grid

DEFAULTS = {"L": 10.0, "V": 25.0, "G": 3, "alpha": 1.0, "beta": 0.0, "rho": 3.0}
AXIS_TYPE = (float, float, int)


@click.command("grid")
@click.option("--L", "L", type=float, help="Total span of the potential.")
@click.option("--V", "V", type=float, help="Barrier height.")
@click.option("--G", "G", type=int, help="Stage.")
@click.option("--alpha", type=float, help="Fixed alpha when it is not a grid axis.")
@click.option("--beta", type=float, help="Fixed beta when it is not a grid axis.")
@click.option("--rho", type=float, help="Fixed rho when it is not a grid axis.")
@click.option("--alpha-axis", type=AXIS_TYPE, default=None, help="MIN MAX COUNT for alpha.")
@click.option("--beta-axis", type=AXIS_TYPE, default=None, help="MIN MAX COUNT for beta.")
@click.option("--rho-axis", type=AXIS_TYPE, default=None, help="MIN MAX COUNT for rho.")
@click.option("--k", "ks", type=float, multiple=True, required=True, help="Wavenumber; repeat for several.")
@run_options
@handle_errors
def grid(config_path, alpha_axis, beta_axis, rho_axis, ks, out, workers, **flags):
    """Scan (alpha, beta, rho) at fixed k values; ill-formed points are flagged, not dropped."""
    values = merge_settings(config_path, flags, DEFAULTS)
    axes = [
        GridAxis(name=name, start=axis[0], stop=axis[1], count=axis[2])
        for name, axis in (("alpha", alpha_axis), ("beta", beta_axis), ("rho", rho_axis))
        if axis is not None
    ]
    options = {"workers": workers or values.get("workers")}
    grid_config = GridConfig(
        L=values["L"],
        V=values["V"],
        G=values["G"],
        alpha=values["alpha"],
        beta=values["beta"],
        rho=values["rho"],
        axes=axes,
        ks=list(ks),
        **{key: value for key, value in options.items() if value is not None},
    )
    rows = run_grid(grid_config)

    header = {"L": grid_config.L, "V": grid_config.V, "G": grid_config.G}
    for name in ("alpha", "beta", "rho"):
        axis = next((axis for axis in axes if axis.name == name), None)
        header[name] = f"{axis.start}:{axis.stop}:{axis.count}" if axis else getattr(grid_config, name)
    body = [(row.alpha, row.beta, row.rho, row.k, row.valid, row.transmission) for row in rows]
    with open_output(out or values.get("out")) as stream:
        write_csv(stream, header, ["alpha", "beta", "rho", "k", "valid", "T"], body)
