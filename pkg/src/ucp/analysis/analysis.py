"""Derived studies: constant-area heights, large-k reflection scaling, saturation with stage."""

import logging
import math
from functools import partial

import numpy as np
from scipy.ndimage import median_filter
from scipy.stats import linregress

from ucp import config
from ucp.errors import AnalysisError, InvalidSpecError
from ucp.geometry.geometry import max_valid_stage, segment_length
from ucp.scattering.scattering import barrier_kernels, bloch_sequence, transmission_ucp
from ucp.schemas.schemas import SaturationEntry, SaturationReport, ScalingFit, first_invalid_stage
from ucp.sweep.sweep import parallel_map

logger = logging.getLogger(__name__)

SCALING_METHODS = ("envelope", "filtered", "normalized")


def constant_area_height(spec, V0):
    """Height V_G keeping the total barrier area 2**G * l_G * V_G equal to L * V0."""
    if not V0 > 0:
        raise InvalidSpecError(f"V0 > 0 violated: V0={V0}")
    return spec.L * V0 / (2**spec.G * segment_length(spec, spec.G))


def reflection_asymptote(spec, V0, k):
    """Large-k reflection 4**G (V_G l_G / 2)**2 k**-2 prod Omega**2 at the constant-area height."""
    height = constant_area_height(spec, V0)
    if not height / k**2 < config.ASYMPTOTE_GUARD:
        raise AnalysisError(
            f"large-k guard violated: V_G/k^2 = {height / k**2:.4g} >= {config.ASYMPTOTE_GUARD} at k={k}"
        )
    width = segment_length(spec, spec.G)
    bloch = bloch_sequence(spec.with_height(height), k)
    return 4.0**spec.G * (height * width / 2.0) ** 2 / k**2 * bloch.product**2


def normalized_reflection(spec, V0, k):
    """R_G / (L * V0)**2 at the constant-area height."""
    height = constant_area_height(spec, V0)
    return transmission_ucp(spec.with_height(height), k).reflection / (spec.L * V0) ** 2


def log_opacity(result):
    """log10(-log10 T); -inf for a fully transparent point."""
    if result.log10_transmission == 0.0:
        return -math.inf
    return math.log10(-result.log10_transmission)


def fit_loglog(ks, log10_values, method="filtered"):
    """Least-squares line through (log10 k, log10 R) after dropping resonance dips.

    A sample is a dip when it sits more than RESONANCE_FLOOR below the running median.
    """
    ks = np.asarray(ks, dtype=float)
    values = np.asarray(log10_values, dtype=float)
    values = np.where(np.isfinite(values), values, -np.inf)
    baseline = median_filter(values, size=config.MEDIAN_WINDOW, mode="nearest")
    keep = np.isfinite(values) & (values >= baseline + math.log10(config.RESONANCE_FLOOR))
    used = int(np.count_nonzero(keep))
    logger.debug("Scaling fit keeps %d of %d samples", used, values.size)
    if used < config.MIN_FIT_POINTS:
        raise AnalysisError(f"only {used} samples survive resonance filtering, need {config.MIN_FIT_POINTS}")
    fit = linregress(np.log10(ks[keep]), values[keep])
    return ScalingFit(
        k_window=(float(ks.min()), float(ks.max())),
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        n_used=used,
        method=method,
    )


def fit_envelope(ks, log10_values):
    """Least-squares line through the upper envelope of log10 R.

    The envelope is the least non-increasing majorant: every sample is replaced by the
    largest value at or beyond its k, so interference dips are bridged rather than dropped.
    """
    ks = np.asarray(ks, dtype=float)
    values = np.asarray(log10_values, dtype=float)
    order = np.argsort(ks)
    ks, values = ks[order], values[order]
    finite = np.isfinite(values)
    used = int(np.count_nonzero(finite))
    if used < config.MIN_FIT_POINTS:
        raise AnalysisError(f"only {used} finite samples for the envelope fit, need {config.MIN_FIT_POINTS}")
    envelope = np.maximum.accumulate(values[finite][::-1])[::-1]
    fit = linregress(np.log10(ks[finite]), envelope)
    return ScalingFit(
        k_window=(float(ks.min()), float(ks.max())),
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        n_used=used,
        method="envelope",
    )


def _scaling_sample(k, spec):
    """(log10 R, log10 of R with 4**G prod Omega**2 divided out) at one k."""
    result = transmission_ucp(spec, k)
    # R / (4**G prod Omega**2) = (eps_minus sin kappa l_G)**2 * T
    _, _, amplitude = barrier_kernels(k, spec.V, segment_length(spec, spec.G))
    if amplitude == 0.0:
        return result.log10_reflection, -math.inf
    return result.log10_reflection, 2.0 * math.log10(abs(amplitude)) + result.log10_transmission


def scaling_samples(spec, V0, k_window, n_points, workers=1):
    """Log-spaced k with log10 R and the prefactor sample at the constant-area height."""
    k_min, k_max = k_window
    if not 0 < k_min < k_max:
        raise AnalysisError(f"0 < k_min < k_max violated: {k_window}")
    if n_points < config.MIN_SCALING_SAMPLES:
        raise AnalysisError(f"n_points >= {config.MIN_SCALING_SAMPLES} violated: n_points={n_points}")
    scaled = spec.with_height(constant_area_height(spec, V0))
    ks = np.geomspace(k_min, k_max, n_points)
    samples = parallel_map(partial(_scaling_sample, spec=scaled), ks.tolist(), workers)
    reflection, prefactor = (np.array(column, dtype=float) for column in zip(*samples))
    return ks, reflection, prefactor


def _fit_samples(ks, reflection, prefactor, method):
    if method == "envelope":
        return fit_envelope(ks, reflection)
    if method == "filtered":
        return fit_loglog(ks, reflection, method="filtered")
    return fit_loglog(ks, prefactor, method="normalized")


def _check_method(method):
    if method not in SCALING_METHODS:
        raise AnalysisError(f"unknown scaling fit method {method!r}, expected one of {', '.join(SCALING_METHODS)}")


def fit_scaling(spec, V0, k_window, n_points, method="envelope", workers=1):
    """Fit the large-k power law of the constant-area reflection R_G.

    envelope fits the upper envelope of log10 R_G, filtered fits log10 R_G after median
    dip rejection, and normalized divides out the interference factor 4**G prod Omega**2,
    leaving the single-barrier prefactor that falls as k**-2 while kappa * l_G stays small.
    """
    _check_method(method)
    return _fit_samples(*scaling_samples(spec, V0, k_window, n_points, workers), method)


def fit_scaling_all(spec, V0, k_window, n_points, workers=1):
    """Every fit method over one shared set of samples, keyed by method."""
    samples = scaling_samples(spec, V0, k_window, n_points, workers)
    return {method: _fit_samples(*samples, method) for method in SCALING_METHODS}


def stage_specs(base, stages):
    return [base.with_stage(G) for G in stages]


def log10_profile(spec, ks, quantity="log10_transmission"):
    return np.array([getattr(transmission_ucp(spec, float(k)), quantity) for k in ks])


def _sup_difference(first, second):
    both = np.isfinite(first) & np.isfinite(second)
    if not both.any():
        return 0.0
    return float(np.max(np.abs(first[both] - second[both])))


def saturation_scan(specs, k_grid, workers=1, V0=None):
    """Sup-norm of log10 differences between consecutive stages over the k grid.

    Without V0 the stages share one height and log10 T is compared. With V0 every stage is
    rescaled to the constant-area height and log10 R is compared, so the specs need only
    share (L, rho, alpha, beta).
    """
    specs = sorted(specs, key=lambda spec: spec.G)
    if len(specs) < 2:
        raise InvalidSpecError("saturation scan needs at least two stages")
    if V0 is None:
        names = "(L, V, rho, alpha, beta)"
        shapes = {(spec.L, spec.V, spec.rho, spec.alpha, spec.beta) for spec in specs}
    else:
        names = "(L, rho, alpha, beta)"
        shapes = {(spec.L, spec.rho, spec.alpha, spec.beta) for spec in specs}
    if len(shapes) > 1:
        raise InvalidSpecError(f"mixed-parameter spec list: specs must share {names}, got {sorted(shapes)}")
    stages = [spec.G for spec in specs]
    if any(later != earlier + 1 for earlier, later in zip(stages, stages[1:])):
        raise InvalidSpecError(f"saturation scan needs consecutive stages, got {stages}")
    ks = np.asarray(k_grid, dtype=float)
    quantity = "log10_transmission"
    scanned = specs
    if V0 is not None:
        quantity = "log10_reflection"
        scanned = [spec.with_height(constant_area_height(spec, V0)) for spec in specs]
    profiles = parallel_map(partial(log10_profile, ks=ks, quantity=quantity), scanned, workers)
    entries = [
        SaturationEntry(stage=lower.G, next_stage=upper.G, metric=_sup_difference(first, second))
        for lower, upper, first, second in zip(specs, specs[1:], profiles, profiles[1:])
    ]
    base = specs[0]
    return SaturationReport(
        L=base.L,
        V=base.V,
        rho=base.rho,
        alpha=base.alpha,
        beta=base.beta,
        k_min=float(ks.min()),
        k_max=float(ks.max()),
        n_k=int(ks.size),
        quantity=quantity,
        V0=V0,
        entries=entries,
    )


def validity_scan(alphas, betas, G):
    """Rows of (alpha, beta, max_valid_stage, valid_at_G) over an (alpha, beta) lattice."""
    rows = []
    for alpha in alphas:
        for beta in betas:
            if alpha == 0 and beta == 0:
                rows.append({"alpha": alpha, "beta": beta, "max_valid_stage": 0, "valid_at_G": False})
                continue
            rows.append(
                {
                    "alpha": alpha,
                    "beta": beta,
                    "max_valid_stage": max_valid_stage(alpha, beta),
                    "valid_at_G": first_invalid_stage(alpha, beta, G) is None,
                }
            )
    return rows
