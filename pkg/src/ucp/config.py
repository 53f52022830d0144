import json
import os
from pathlib import Path

from ucp.errors import InvalidSpecError


def _available_parallelism():
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


LOG_LEVEL = os.getenv("UCP_LOG_LEVEL", "WARNING")

# Execution
WORKERS = int(os.getenv("UCP_WORKERS", "0")) or _available_parallelism()
ORACLE_MAX_STAGE = int(os.getenv("UCP_ORACLE_MAX_STAGE", "16"))

# Numerics
SERIES_THRESHOLD = 1e-8
LOG_DOMAIN_THRESHOLD = 1e150
DET_DRIFT_TOLERANCE = 1e-9
DET_CHECK_INTERVAL = 4096
ENGINE_AGREEMENT = 1e-9
# |kappa l| above which an evanescent barrier is handled through scaled kernels
OPAQUE_PHASE = 600.0

# Analysis
ASYMPTOTE_GUARD = 0.1
RESONANCE_FLOOR = 1e-3
MEDIAN_WINDOW = 9
MIN_FIT_POINTS = 10
MIN_SCALING_SAMPLES = 50

# Output
OUTPUT_DIGITS = 17

# Flat keys accepted in config files, mirroring the long CLI flags
CONFIG_KEYS = ("L", "V", "rho", "alpha", "beta", "G", "kmin", "kmax", "nk", "scale", "engine", "workers", "out")


def load_config_file(path):
    """Read a flat config file: a JSON object or `key=value` lines."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpecError(f"Malformed config file {path}: {exc}") from exc
    else:
        values = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InvalidSpecError(f"Malformed config line: {line!r}")
            values[key.strip()] = value.strip()
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise InvalidSpecError(f"Unknown config keys: {', '.join(unknown)}")
    return values


def dump_config_file(values, path):
    """Write the flat JSON mirror of the flags, skipping unset entries."""
    payload = {key: values[key] for key in CONFIG_KEYS if values.get(key) is not None}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
