"""Closed-form transmission through super-periodic barrier systems.

Units are natural (hbar = 1, 2m = 1): k = sqrt(E) outside, kappa = sqrt(k**2 - V) inside.
The unit-cell matrix is referenced to the barrier centre and maps right-side amplitudes
onto left-side ones, so T = 1 / |m22|**2 and the Bloch phase of a cell repeated at
spacing s is Re(m22 * exp(i k s)).
"""

import cmath
import logging
import math

import numpy as np
from scipy.special import logsumexp

from ucp import config
from ucp.errors import InvalidSpecError, NumericalError
from ucp.geometry.geometry import gamma1, gamma2, segment_length, super_period
from ucp.models.models import BlochSequence, TransferMatrix
from ucp.schemas.schemas import ScatterResult
from ucp.special.special import chebyshev_u

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
LN4 = math.log(4.0)
LN10 = math.log(10.0)


def _check_wavenumber(k):
    if not (math.isfinite(k) and k > 0):
        raise InvalidSpecError(f"k > 0 violated: k={k}")


def barrier_kernels(k, V, width):
    """Return (cos kappa*l, eps_plus*sin kappa*l, eps_minus*sin kappa*l) as real numbers.

    Written through sinc = sin(kappa*l)/kappa so that the 1/kappa pole of eps_minus cancels:
    eps_minus*sin = V*sinc/(2k) and eps_plus*sin = (2k**2 - V)*sinc/(2k).
    """
    _check_wavenumber(k)
    if not width > 0:
        raise InvalidSpecError(f"width > 0 violated: width={width}")
    kappa_sq = k * k - V
    kappa = cmath.sqrt(complex(kappa_sq))
    phase = kappa * width
    if abs(phase) < config.SERIES_THRESHOLD:
        z2 = kappa_sq * width * width
        cos_kl = 1.0 - z2 / 2.0 + z2 * z2 / 24.0
        sinc = width * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    else:
        try:
            cos_kl = cmath.cos(phase).real
            sinc = (cmath.sin(phase) / kappa).real
        except OverflowError as exc:
            raise NumericalError(f"Barrier too opaque for double precision: |kappa*l|={abs(phase):.6g}") from exc
    return cos_kl, (2.0 * k * k - V) * sinc / (2.0 * k), V * sinc / (2.0 * k)


def barrier_log_kernels(k, V, width):
    """Kernels of an evanescent barrier divided by exp(|kappa*l|), plus that exponent.

    Returns (log_scale, cos, eps_plus*sin, eps_minus*sin) with every true kernel equal to the
    returned one times exp(log_scale). Below OPAQUE_PHASE the scale is zero and the kernels
    are those of barrier_kernels.
    """
    _check_wavenumber(k)
    if not width > 0:
        raise InvalidSpecError(f"width > 0 violated: width={width}")
    decay_sq = V - k * k
    if decay_sq <= 0 or math.sqrt(decay_sq) * width <= config.OPAQUE_PHASE:
        return (0.0, *barrier_kernels(k, V, width))
    decay = math.sqrt(decay_sq)
    phase = decay * width
    cosh_scaled = 0.5 + 0.5 * math.exp(-2.0 * phase)
    sinc_scaled = -0.5 * math.expm1(-2.0 * phase) / decay
    return (
        phase,
        cosh_scaled,
        (2.0 * k * k - V) * sinc_scaled / (2.0 * k),
        V * sinc_scaled / (2.0 * k),
    )


def barrier_matrix(k, V, width):
    """Transfer matrix of a rectangular barrier of height V and the given width."""
    cos_kl, eps_plus_sin, eps_minus_sin = barrier_kernels(k, V, width)
    advance = cmath.exp(1j * k * width)
    return TransferMatrix(
        (cos_kl - 1j * eps_plus_sin) * advance,
        1j * eps_minus_sin,
        -1j * eps_minus_sin,
        (cos_kl + 1j * eps_plus_sin) / advance,
    )


def _bloch_recursion(unit, k, gamma1s, gamma2):
    """Omega_q for two-fold repetition at every level.

    Omega_q = 2**(q-1) |m22| cos(theta - k*gamma1(q)) prod_{p<q} Omega_p
              - sum_{r<q} 2**(q-r-1) cos(k*gamma2(q, r)) prod_{r<p<q} Omega_p
    """
    size = abs(unit.m22)
    theta = math.atan2(unit.m22.imag, unit.m22.real)
    omegas = []
    prefix = []
    for q in range(1, len(gamma1s) + 1):
        lead = prefix[-1] if prefix else 1.0
        omega = 2 ** (q - 1) * size * math.cos(theta - k * gamma1s[q - 1]) * lead
        between = 1.0
        for r in range(q - 1, 0, -1):
            omega -= 2 ** (q - r - 1) * math.cos(k * gamma2(q, r)) * between
            between *= omegas[r - 1]
        if not math.isfinite(omega):
            raise NumericalError(f"Bloch phase Omega_{q} is not finite at k={k}")
        omegas.append(omega)
        prefix.append(lead * omega)
    return BlochSequence(omegas=tuple(omegas), prefix_products=tuple(prefix))


def bloch_from_gammas(unit, k, gamma1s, gamma2):
    """N=2 recursion with caller supplied offsets; gamma2 is called as gamma2(q, r)."""
    _check_wavenumber(k)
    return _bloch_recursion(unit, k, list(gamma1s), gamma2)


def bloch_sequence(spec, k):
    _check_wavenumber(k)
    unit = barrier_matrix(k, spec.V, segment_length(spec, spec.G))
    gamma1s = [gamma1(spec, q) for q in range(1, spec.G + 1)]
    return _bloch_recursion(unit, k, gamma1s, lambda q, r: gamma2(spec, q, r))


def bloch_sequence_complex(spec, k):
    """Half-traces of every level computed with full complex matrices.

    W_q = W_{q-1} P(s_q) W_{q-1} P(s_q)^-1 with P(s) = diag(exp(-iks), exp(iks)); the
    half-trace of W_{q-1} P(s_q) is Omega_q, so its imaginary part measures round-off.
    """
    _check_wavenumber(k)
    level = barrier_matrix(k, spec.V, segment_length(spec, spec.G))
    traces = []
    for f in range(1, spec.G + 1):
        shift = cmath.exp(1j * k * super_period(spec, f))
        offset = TransferMatrix.diagonal(1.0 / shift, shift)
        placed = level @ offset
        traces.append(placed.half_trace())
        level = placed @ level @ offset.adjugate()
    return traces


def _signed_log_sum(terms):
    if not terms:
        return 0.0, -math.inf
    signs, logs = zip(*terms)
    with np.errstate(divide="ignore"):
        log_abs, sign = logsumexp(logs, b=signs, return_sign=True)
    if sign == 0:
        return 0.0, -math.inf
    return float(sign), float(log_abs)


def _bloch_log_recursion(log_size, theta, k, gamma1s, gamma2):
    """The N=2 recursion carried as (sign, ln|Omega_q|) pairs; sign 0 marks Omega_q = 0."""
    signs = []
    logs = []
    lead_sign, lead_log = 1.0, 0.0
    for q in range(1, len(gamma1s) + 1):
        terms = []
        phase = math.cos(theta - k * gamma1s[q - 1])
        if phase != 0.0 and lead_sign != 0.0:
            terms.append(
                (lead_sign * math.copysign(1.0, phase), (q - 1) * LN2 + log_size + math.log(abs(phase)) + lead_log)
            )
        between_sign, between_log = 1.0, 0.0
        for r in range(q - 1, 0, -1):
            phase = math.cos(k * gamma2(q, r))
            if phase != 0.0 and between_sign != 0.0:
                log_term = (q - r - 1) * LN2 + math.log(abs(phase)) + between_log
                terms.append((-between_sign * math.copysign(1.0, phase), log_term))
            between_sign *= signs[r - 1]
            between_log += logs[r - 1]
        sign, log_abs = _signed_log_sum(terms)
        signs.append(sign)
        logs.append(log_abs)
        lead_sign *= sign
        lead_log += log_abs
    return tuple(zip(signs, logs))


def bloch_log_sequence(spec, k):
    """(sign, ln|Omega_q|) for q = 1..G, usable where Omega_q itself would overflow."""
    _check_wavenumber(k)
    width = segment_length(spec, spec.G)
    log_scale, cos_kl, eps_plus_sin, _ = barrier_log_kernels(k, spec.V, width)
    log_size = log_scale + math.log(math.hypot(cos_kl, eps_plus_sin))
    theta = math.atan2(eps_plus_sin, cos_kl) - k * width
    gamma1s = [gamma1(spec, q) for q in range(1, spec.G + 1)]
    return _bloch_log_recursion(log_size, theta, k, gamma1s, lambda q, r: gamma2(spec, q, r))


def _softplus(u):
    """ln(1 + e^u) without overflow."""
    return float(np.logaddexp(0.0, u))


def _scatter_from_amplitude(log_x, direct_x, log_domain):
    """Build T = 1/(1+X), R = X/(1+X) from ln X, or from direct_x() on the direct path.

    ln X = -inf marks an exact transmission resonance. direct_x=None, or an X that does not
    fit a double, always takes the logarithmic path.
    """
    if log_x == -math.inf:
        return ScatterResult(
            transmission=1.0, reflection=0.0, log10_transmission=0.0, log10_reflection=-math.inf
        )
    # ln R = -ln(1 + 1/X) on both paths, so it never rounds above zero
    log10_reflection = -_softplus(-log_x) / LN10
    if log_domain is None:
        log_domain = log_x > math.log(config.LOG_DOMAIN_THRESHOLD)
    if not log_domain and direct_x is not None:
        try:
            x = direct_x()
        except OverflowError:
            x = math.inf
        if math.isfinite(x):
            return ScatterResult(
                transmission=1.0 / (1.0 + x),
                reflection=x / (1.0 + x),
                log10_transmission=-math.log1p(x) / LN10,
                log10_reflection=log10_reflection,
            )
    logger.debug("Log-domain transmission, ln X = %.6g", log_x)
    log_t = -_softplus(log_x)
    return ScatterResult(
        transmission=math.exp(log_t),
        reflection=-math.expm1(log_t),
        log10_transmission=log_t / LN10,
        log10_reflection=log10_reflection,
    )


def transmission_ucp(spec, k, log_domain=None):
    """T_G = 1 / (1 + 4**G * (eps_minus sin kappa l_G)**2 * prod Omega_q**2).

    log_domain=None switches to the logarithmic path once the product term exceeds
    LOG_DOMAIN_THRESHOLD; True or False forces one path. Barriers too opaque for a double,
    and Omegas that overflow, are carried as logarithms and always take the logarithmic path.
    """
    _check_wavenumber(k)
    width = segment_length(spec, spec.G)
    log_scale, _, _, amplitude = barrier_log_kernels(k, spec.V, width)
    if amplitude == 0.0:
        return _scatter_from_amplitude(-math.inf, None, log_domain)
    log_amplitude = log_scale + math.log(abs(amplitude))
    if log_scale == 0.0:
        try:
            bloch = bloch_sequence(spec, k)
        except NumericalError as exc:
            logger.debug("Falling back to logarithmic Bloch phases: %s", exc)
        else:
            if 0.0 in bloch.omegas:
                return _scatter_from_amplitude(-math.inf, None, log_domain)
            log_x = spec.G * LN4 + 2.0 * log_amplitude + 2.0 * sum(math.log(abs(w)) for w in bloch.omegas)
            scaled = amplitude * bloch.product
            return _scatter_from_amplitude(log_x, lambda: 4.0**spec.G * scaled * scaled, log_domain)
    phases = bloch_log_sequence(spec, k)
    if any(sign == 0.0 for sign, _ in phases):
        return _scatter_from_amplitude(-math.inf, None, log_domain)
    log_x = spec.G * LN4 + 2.0 * log_amplitude + 2.0 * sum(log_abs for _, log_abs in phases)
    return _scatter_from_amplitude(log_x, None, log_domain)


def transmission_spp(unit, Ns, ss, k, log_domain=None):
    """Generic super-periodic transmission: unit cell repeated Ns[f] times at spacing ss[f].

    Omega_q = |m22| cos(theta - k*(sum_{p<q} (N_p - 1) s_p - s_q)) prod_{p<q} U_{N_p-1}(Omega_p)
              - sum_{r<q} cos(k*(sum_{r<=p<q} N_p s_p - sum_{r<p<=q} s_p))
                U_{N_r-2}(Omega_r) prod_{r<p<q} U_{N_p-1}(Omega_p)
    T = 1 / (1 + (|m12| prod_q U_{N_q-1}(Omega_q))**2)
    """
    _check_wavenumber(k)
    if len(Ns) != len(ss):
        raise InvalidSpecError(f"len(Ns) == len(ss) violated: {len(Ns)} != {len(ss)}")
    if any(n < 1 for n in Ns):
        raise InvalidSpecError(f"every N >= 1 violated: Ns={list(Ns)}")
    size = abs(unit.m22)
    theta = math.atan2(unit.m22.imag, unit.m22.real)
    repeat = []
    restart = []
    for q in range(1, len(Ns) + 1):
        lead_phase = sum((Ns[p] - 1) * ss[p] for p in range(q - 1)) - ss[q - 1]
        omega = size * math.cos(theta - k * lead_phase) * math.prod(repeat)
        between = 1.0
        for r in range(q - 1, 0, -1):
            offset = sum(Ns[p] * ss[p] for p in range(r - 1, q - 1)) - sum(ss[p] for p in range(r, q))
            omega -= math.cos(k * offset) * restart[r - 1] * between
            between *= repeat[r - 1]
        if not math.isfinite(omega):
            raise NumericalError(f"Bloch phase Omega_{q} is not finite at k={k}")
        repeat.append(chebyshev_u(Ns[q - 1] - 1, omega))
        restart.append(chebyshev_u(Ns[q - 1] - 2, omega))
    amplitude = abs(unit.m12)
    if amplitude == 0.0 or 0.0 in repeat:
        return _scatter_from_amplitude(-math.inf, None, log_domain)
    log_x = 2.0 * math.log(amplitude) + 2.0 * sum(math.log(abs(u)) for u in repeat)
    scaled = amplitude * math.prod(repeat)
    return _scatter_from_amplitude(log_x, lambda: scaled * scaled, log_domain)
