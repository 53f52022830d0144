import click
import numpy as np

from ucp.analysis.analysis import validity_scan
from ucp.commands.options import (
    SPEC_DEFAULTS,
    grid_options,
    handle_errors,
    merge_settings,
    open_output,
    run_options,
    spec_options,
)
from ucp.config import ENGINE_AGREEMENT
from ucp.errors import InvalidSpecError
from ucp.geometry.geometry import gap_length, max_valid_stage, segment_length, super_periods
from ucp.output.output import write_json
from ucp.schemas.schemas import SweepConfig
from ucp.sweep.sweep import run_transmission_sweep

DEFAULTS = {**SPEC_DEFAULTS, "kmin": 0.2, "kmax": 50.0, "nk": 200, "scale": "log"}


def _axis(bounds, fixed):
    if not bounds:
        return [fixed]
    start, stop, count = bounds
    if count < 1 or stop < start:
        raise InvalidSpecError(f"scan axis needs MIN <= MAX and COUNT >= 1, got {bounds}")
    return [float(value) for value in np.linspace(start, stop, count)]


@click.command("validate")
@spec_options
@grid_options
@click.option("--check-oracle", is_flag=True, help="Compare both engines on the k grid; exit 1 above 1e-9.")
@click.option(
    "--scan-alpha",
    type=(float, float, int),
    help="MIN MAX COUNT: alpha values of a validity scan at stage --G.",
)
@click.option(
    "--scan-beta",
    type=(float, float, int),
    help="MIN MAX COUNT: beta values of a validity scan at stage --G.",
)
@run_options
@handle_errors
def validate(config_path, check_oracle, scan_alpha, scan_beta, **flags):
    """Validate a spec and report its geometry as JSON."""
    values = merge_settings(config_path, flags, DEFAULTS)
    engine = "both" if check_oracle else "closed_form"
    sweep_config = SweepConfig.from_flat({**values, "engine": engine})
    spec = sweep_config.spec
    report = {
        "spec": spec.model_dump(),
        "valid": True,
        "max_valid_stage": max_valid_stage(spec.alpha, spec.beta),
        "l_G": segment_length(spec, spec.G),
        "gap_lengths": [gap_length(spec, g) for g in range(1, spec.G + 1)],
        "super_periods": super_periods(spec),
    }
    if scan_alpha or scan_beta:
        alphas = _axis(scan_alpha, spec.alpha)
        betas = _axis(scan_beta, spec.beta)
        report["validity_scan"] = validity_scan(alphas, betas, spec.G)
    failed = False
    if check_oracle:
        rows = run_transmission_sweep(sweep_config)
        worst = max(row.abs_diff for row in rows)
        report["max_abs_diff"] = worst
        failed = worst > ENGINE_AGREEMENT
    with open_output(sweep_config.out) as stream:
        write_json(stream, report)
    if failed:
        click.echo(f"Error: engines disagree: max |T_closed - T_oracle| = {report['max_abs_diff']:.3g}", err=True)
        click.get_current_context().exit(1)
