import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from pydantic import ValidationError

from ucp.oracle.oracle import check_oracle_stage, transmission_oracle
from ucp.scattering.scattering import transmission_ucp
from ucp.schemas.schemas import GridRow, SweepRow, UcpSpec

logger = logging.getLogger(__name__)


def parallel_map(function, items, workers=1):
    """Map over items keeping input order; workers <= 1 runs in-process."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [function(item) for item in items]
    chunksize = max(1, len(items) // (4 * workers))
    logger.debug("Dispatching %d tasks to %d workers (chunksize %d)", len(items), workers, chunksize)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items, chunksize=chunksize))


def _sweep_point(k, spec, engine, max_stage):
    k = float(k)
    if engine == "oracle":
        result = transmission_oracle(spec, k, max_stage=max_stage)
    else:
        result = transmission_ucp(spec, k)
    extra = {}
    if engine == "both":
        oracle = transmission_oracle(spec, k, max_stage=max_stage)
        extra = {
            "oracle_transmission": oracle.transmission,
            "abs_diff": abs(result.transmission - oracle.transmission),
        }
    return SweepRow(
        k=k,
        transmission=result.transmission,
        reflection=result.reflection,
        log10_transmission=result.log10_transmission,
        **extra,
    )


def run_transmission_sweep(sweep_config, max_stage=None):
    """Evaluate the configured engine on every k of the grid, in grid order."""
    if sweep_config.engine != "closed_form":
        check_oracle_stage(sweep_config.spec, max_stage)
    worker = partial(_sweep_point, spec=sweep_config.spec, engine=sweep_config.engine, max_stage=max_stage)
    return parallel_map(worker, sweep_config.k_grid(), sweep_config.workers)


def _grid_point(point, grid_config):
    alpha, beta, rho = point
    try:
        spec = UcpSpec(L=grid_config.L, V=grid_config.V, rho=rho, alpha=alpha, beta=beta, G=grid_config.G)
    except ValidationError:
        return [GridRow(alpha=alpha, beta=beta, rho=rho, k=k, valid=False) for k in grid_config.ks]
    return [
        GridRow(alpha=alpha, beta=beta, rho=rho, k=k, valid=True, transmission=transmission_ucp(spec, k).transmission)
        for k in grid_config.ks
    ]


def run_grid(grid_config):
    """Rows for every (alpha, beta, rho, k); ill-formed points are kept and flagged."""
    worker = partial(_grid_point, grid_config=grid_config)
    blocks = parallel_map(worker, grid_config.points(), grid_config.workers)
    return [row for block in blocks for row in block]
