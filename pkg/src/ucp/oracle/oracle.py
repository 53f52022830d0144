"""Brute-force transmission by multiplying one transfer matrix per region.

Matrices here map amplitudes at the left edge of a region onto amplitudes at its right
edge, and the running product is built left to right in the propagation direction.
"""

import cmath
import logging
import math

from ucp import config
from ucp.errors import InvalidSpecError, NumericalError, OracleInfeasibleError
from ucp.geometry.geometry import build_segments
from ucp.models.models import Region, RegionKind, RegionSequence, TransferMatrix
from ucp.scattering.scattering import barrier_matrix
from ucp.schemas.schemas import ScatterResult

logger = logging.getLogger(__name__)

GAP_TOLERANCE = 1e-12


def propagation_matrix(k, d):
    """Free propagation over a distance d: diag(exp(ikd), exp(-ikd))."""
    if not k > 0:
        raise InvalidSpecError(f"k > 0 violated: k={k}")
    if d < 0:
        raise InvalidSpecError(f"d >= 0 violated: d={d}")
    advance = cmath.exp(1j * k * d)
    return TransferMatrix.diagonal(advance, 1.0 / advance)


def region_sequence(geometry):
    """Alternate gaps and barriers across [0, span], dropping gaps below rounding size."""
    tolerance = GAP_TOLERANCE * geometry.span
    regions = []
    cursor = 0.0
    for offset, width in geometry.barriers:
        if offset - cursor > tolerance:
            regions.append(Region(RegionKind.GAP, offset - cursor))
        regions.append(Region(RegionKind.BARRIER, width))
        cursor = offset + width
    if geometry.span - cursor > tolerance:
        regions.append(Region(RegionKind.GAP, geometry.span - cursor))
    return RegionSequence(tuple(regions))


def _region_step(region, V, k):
    if region.kind is RegionKind.GAP:
        return propagation_matrix(k, region.width)
    # Re-reference the centred barrier matrix to its two edges and flip its direction
    half = propagation_matrix(k, region.width / 2.0)
    return half @ barrier_matrix(k, V, region.width).adjugate() @ half


def oracle_matrix(regions, V, k):
    total = TransferMatrix.identity()
    steps = {}
    for index, region in enumerate(regions, start=1):
        step = steps.get(region)
        if step is None:
            step = steps[region] = _region_step(region, V, k)
        total = step @ total
        if index % config.DET_CHECK_INTERVAL == 0:
            logger.debug("Oracle checkpoint %d/%d: det drift %.3g", index, len(regions), total.det_drift())
    drift = total.det_drift()
    if drift > config.DET_DRIFT_TOLERANCE:
        logger.warning("Oracle determinant drift %.3g over %d regions at k=%g", drift, len(regions), k)
    return total


def transmission_regions(regions, V, k):
    total = oracle_matrix(regions, V, k)
    if not total.is_finite():
        raise NumericalError(f"Oracle product overflowed at k={k}")
    size = abs(total.m22)
    # |m22| >= 1 up to rounding for a lossless system
    transmission = min(1.0, (1.0 / size) ** 2)
    reflection = 1.0 - transmission
    return ScatterResult(
        transmission=transmission,
        reflection=reflection,
        log10_transmission=min(0.0, -2.0 * math.log10(size)),
        log10_reflection=math.log10(reflection) if reflection > 0 else -math.inf,
    )


def check_oracle_stage(spec, max_stage=None):
    cap = config.ORACLE_MAX_STAGE if max_stage is None else max_stage
    if spec.G > cap:
        raise OracleInfeasibleError(
            f"oracle infeasible: G={spec.G} needs {2**spec.G} barrier products, cap is G <= {cap}; "
            "use the closed-form engine"
        )


def transmission_oracle(spec, k, max_stage=None):
    check_oracle_stage(spec, max_stage)
    return transmission_regions(region_sequence(build_segments(spec)), spec.V, k)
