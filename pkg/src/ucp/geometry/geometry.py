"""UCP geometry: segment and gap lengths, super-periods, phase offsets and explicit intervals.

Stage g removes the fraction rho**-(alpha + beta*g) from the middle of every segment of
stage g-1, so a stage-G system holds 2**G equal barriers of width l_G.
"""

import logging
import math

import numpy as np

from ucp.errors import InvalidSpecError
from ucp.models.models import SegmentGeometry
from ucp.schemas.schemas import first_invalid_stage
from ucp.special.special import q_pochhammer

logger = logging.getLogger(__name__)


def _check_index(name, value, low, high):
    if not low <= value <= high:
        raise InvalidSpecError(f"{name}={value} outside the valid range [{low}, {high}]")


def removal_fraction(spec, g):
    return spec.rho ** -(spec.alpha + spec.beta * g)


def validate_stage_range(alpha, beta, G):
    """Raise InvalidSpecError naming the first stage where alpha + beta*g <= 0."""
    g = first_invalid_stage(alpha, beta, G)
    if g is not None:
        raise InvalidSpecError(
            f"alpha + beta*G > 0 violated: alpha + beta*g <= 0 at g={g} (alpha={alpha}, beta={beta})"
        )


def max_valid_stage(alpha, beta):
    """Largest stage G for which every g <= G keeps alpha + beta*g > 0.

    Returns None when the bound never bites (beta >= 0 with alpha + beta > 0) and 0
    when even the first stage is ill formed.
    """
    if alpha == 0 and beta == 0:
        raise InvalidSpecError("(alpha, beta) != (0, 0) violated: alpha and beta cannot both be zero")
    if alpha + beta <= 0:
        return 0
    if beta >= 0:
        return None
    g = math.floor(-alpha / beta)
    while alpha + beta * (g + 1) > 0:
        g += 1
    while alpha + beta * g <= 0:
        g -= 1
    return g


def segment_length(spec, g):
    """l_g = (L / 2**g) * prod_{j=1..g} (1 - rho**-(alpha + beta*j))."""
    _check_index("g", g, 0, spec.G)
    return spec.L / 2**g * math.prod(1.0 - removal_fraction(spec, j) for j in range(1, g + 1))


def segment_length_pochhammer(spec, g):
    _check_index("g", g, 0, spec.G)
    shrink = spec.rho ** -spec.beta
    if spec.alpha == 0:
        return spec.L / 2**g * q_pochhammer(removal_fraction(spec, 1), shrink, g)
    scale = spec.rho**spec.alpha
    return spec.L * scale / (2**g * (scale - 1.0)) * q_pochhammer(1.0 / scale, shrink, g + 1)


def gap_length(spec, g):
    """d_g = l_{g-1} * rho**-(alpha + beta*g), the gap opened at stage g."""
    _check_index("g", g, 1, spec.G)
    return segment_length(spec, g - 1) * removal_fraction(spec, g)


def super_period(spec, f):
    """Distance s_f between the starts of the two copies repeated at level f (f=1 innermost)."""
    _check_index("f", f, 1, spec.G)
    m = spec.G + 1 - f
    head = spec.L / 2**m * (1.0 + removal_fraction(spec, m))
    return head * math.prod(1.0 - removal_fraction(spec, j) for j in range(1, m))


def super_period_pochhammer(spec, f):
    _check_index("f", f, 1, spec.G)
    m = spec.G + 1 - f
    shrink = spec.rho ** -spec.beta
    head = 1.0 + removal_fraction(spec, m)
    if spec.alpha == 0:
        return spec.L / 2**m * head * q_pochhammer(removal_fraction(spec, 1), shrink, m - 1)
    scale = spec.rho**spec.alpha
    return spec.L * scale / (2**m * (scale - 1.0)) * head * q_pochhammer(1.0 / scale, shrink, m)


def super_periods(spec):
    return [super_period(spec, f) for f in range(1, spec.G + 1)]


def gamma1(spec, q):
    """Phase offset sum_{p<q} s_p - s_q, which reduces to -(l_G + d_{G-q+1}) < 0."""
    _check_index("q", q, 1, spec.G)
    return -(segment_length(spec, spec.G) + gap_length(spec, spec.G - q + 1))


def gamma2(spec, q, r):
    if not r < q:
        raise InvalidSpecError(f"gamma2 needs r < q, got q={q}, r={r}")
    _check_index("r", r, 1, spec.G)
    _check_index("q", q, 1, spec.G)
    return gap_length(spec, spec.G - r + 1) - gap_length(spec, spec.G - q + 1)


def super_periods_from_gamma1(gamma1s):
    """Recover s_1..s_G from gamma1(q) = sum_{p<q} s_p - s_q."""
    periods = []
    running = 0.0
    for value in gamma1s:
        period = running - value
        periods.append(period)
        running += period
    return periods


def total_gap_width(spec):
    return spec.L - 2**spec.G * segment_length(spec, spec.G)


def build_segments(spec):
    """Split [0, L] stage by stage, keeping the two outer pieces of every interval."""
    validate_stage_range(spec.alpha, spec.beta, spec.G)
    offsets = np.zeros(1)
    width = spec.L
    for g in range(1, spec.G + 1):
        piece = (width - width * removal_fraction(spec, g)) / 2.0
        offsets = np.column_stack((offsets, offsets + (width - piece))).ravel()
        width = piece
    logger.debug("Built %d segments of width %.6g for G=%d", offsets.size, width, spec.G)
    return SegmentGeometry(span=spec.L, offsets=offsets, widths=np.full(offsets.size, width))


# Closed forms for the general Cantor family (alpha=1, beta=0)
def general_cantor_segment_length(L, rho, G):
    return L * ((rho - 1.0) / (2.0 * rho)) ** G


def general_cantor_gap_length(L, rho, G):
    return L / rho * ((rho - 1.0) / (2.0 * rho)) ** (G - 1)


def general_cantor_gamma1(L, rho, G, q):
    ratio = (rho - 1.0) / (2.0 * rho)
    return -L * ratio**G * (1.0 + ratio**-q / rho)


def general_cantor_gamma2(L, rho, G, q, r):
    ratio = (rho - 1.0) / (2.0 * rho)
    return L / rho * (ratio ** (G - r) - ratio ** (G - q))


# Closed forms for the Smith-Volterra-Cantor family (alpha=0, beta=1)
def svc_segment_length(L, rho, G):
    return L / 2**G * math.prod(1.0 - rho**-j for j in range(1, G + 1))


def svc_gap_length(L, rho, G):
    return L / (rho**G * 2 ** (G - 1)) * math.prod(1.0 - rho**-j for j in range(1, G))


def svc_gamma1(L, rho, G, q):
    tail = L / (2 ** (G - q) * rho ** (G - q + 1)) * math.prod(1.0 - rho**-j for j in range(1, G - q + 1))
    return -(svc_segment_length(L, rho, G) + tail)


def svc_gamma2(L, rho, G, q, r):
    return svc_gap_length(L, rho, G - r + 1) - svc_gap_length(L, rho, G - q + 1)
