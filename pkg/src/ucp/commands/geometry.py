import click

from ucp.commands.options import (
    SPEC_DEFAULTS,
    handle_errors,
    merge_settings,
    open_output,
    output_options,
    spec_options,
)
from ucp.geometry.geometry import build_segments, segment_length, total_gap_width
from ucp.output.output import spec_header, write_csv
from ucp.schemas.schemas import UcpSpec

SPEC_KEYS = ("L", "V", "rho", "alpha", "beta", "G")


@click.command("geometry")
@spec_options
@output_options
@handle_errors
def geometry(config_path, out, **flags):
    """Write the explicit barrier intervals as CSV rows index,offset,width."""
    values = merge_settings(config_path, flags, SPEC_DEFAULTS)
    spec = UcpSpec(**{key: values[key] for key in SPEC_KEYS})
    segments = build_segments(spec)
    body = [(index, offset, width) for index, (offset, width) in enumerate(segments.barriers)]
    footer = {"l_G": segment_length(spec, spec.G), "total_gap": total_gap_width(spec)}
    with open_output(out or values.get("out")) as stream:
        write_csv(stream, spec_header(spec), ["index", "offset", "width"], body, footer)
