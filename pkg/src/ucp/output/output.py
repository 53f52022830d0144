import csv
import json

from ucp import config


def format_float(value):
    return f"{value:.{config.OUTPUT_DIGITS}g}"


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def spec_header(spec):
    return {key: _cell(value) for key, value in spec.model_dump().items()}


def write_csv(stream, header, columns, rows, footer=None):
    """CSV body framed by `# key=value` comment lines before and after."""
    for key, value in header.items():
        stream.write(f"# {key}={_cell(value)}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    for key, value in (footer or {}).items():
        stream.write(f"# {key}={_cell(value)}\n")


def write_json(stream, payload):
    json.dump(payload, stream, indent=2, sort_keys=True)
    stream.write("\n")
