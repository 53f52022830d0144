import math

import numpy as np
import pytest

from ucp.analysis.analysis import (
    constant_area_height,
    fit_envelope,
    fit_loglog,
    fit_scaling,
    fit_scaling_all,
    log_opacity,
    normalized_reflection,
    reflection_asymptote,
    saturation_scan,
    stage_specs,
    validity_scan,
)
from ucp.errors import AnalysisError, InvalidSpecError
from ucp.geometry.geometry import segment_length
from ucp.schemas.schemas import ScatterResult, UcpSpec


def reflection_spec(alpha, beta, G):
    return UcpSpec(L=1.0, V=10.0, rho=2.5, alpha=alpha, beta=beta, G=G)


def test_constant_area_height():
    spec = reflection_spec(0.5, 0.0, 5)
    height = constant_area_height(spec, 10.0)
    assert 2**5 * segment_length(spec, 5) * height == pytest.approx(10.0, rel=1e-12)
    assert constant_area_height(reflection_spec(0.5, 0.0, 0), 10.0) == pytest.approx(10.0)
    with pytest.raises(InvalidSpecError):
        constant_area_height(spec, 0.0)


def test_stage_zero_asymptote():
    spec = reflection_spec(0.5, 0.0, 0)
    assert reflection_asymptote(spec, 10.0, 100.0) == pytest.approx((10.0 * 1.0 / 2) ** 2 / 100.0**2, rel=1e-12)


def test_asymptote_guard():
    with pytest.raises(AnalysisError, match="large-k guard"):
        reflection_asymptote(reflection_spec(0.5, 0.0, 0), 10.0, 5.0)


def test_asymptote_tracks_reflection_at_large_k():
    spec = reflection_spec(0.5, 0.0, 10)
    height = constant_area_height(spec, 10.0)
    for factor in (50.0, 100.0, 200.0):
        k = factor * math.sqrt(height)
        actual = normalized_reflection(spec, 10.0, k) * (spec.L * 10.0) ** 2
        assert actual / reflection_asymptote(spec, 10.0, k) == pytest.approx(1.0, abs=0.05)


@pytest.mark.parametrize("alpha, beta", [(0.5, 0.0), (0.25, 0.1)])
@pytest.mark.parametrize("G", [5, 10])
def test_prefactor_falls_as_inverse_square(alpha, beta, G):
    fit = fit_scaling(reflection_spec(alpha, beta, G), 10.0, (50.0, 500.0), 400, method="normalized")
    assert fit.slope == pytest.approx(-2.0, abs=0.1)
    assert fit.method == "normalized"
    assert fit.n_used >= 10


def test_reflection_envelope_falls_near_inverse_square():
    # Interference between levels bends the envelope away from an exact -2
    fits = fit_scaling_all(reflection_spec(0.5, 0.0, 5), 10.0, (50.0, 500.0), 400)
    envelope = fits["envelope"]
    assert envelope.method == "envelope"
    assert envelope.slope == pytest.approx(-2.0, abs=0.25)
    assert envelope.n_used == 400
    assert fits["filtered"].slope < 0
    assert fit_scaling(reflection_spec(0.5, 0.0, 5), 10.0, (50.0, 500.0), 400) == envelope


def test_envelope_bridges_dips():
    ks = np.geomspace(1.0, 100.0, 100)
    values = 1.0 - 2.0 * np.log10(ks)
    assert fit_envelope(ks, values).slope == pytest.approx(-2.0, abs=1e-9)
    values[[20, 50]] = -10.0
    values[70] = -np.inf
    fit = fit_envelope(ks, values)
    assert fit.slope == pytest.approx(-2.0, abs=0.01)
    assert fit.n_used == 99


def test_unknown_fit_method():
    with pytest.raises(AnalysisError, match="unknown scaling fit method"):
        fit_scaling(reflection_spec(0.5, 0.0, 2), 10.0, (50.0, 500.0), 100, method="peaks")


def test_fit_loglog_drops_resonance_dips():
    ks = np.geomspace(1.0, 100.0, 100)
    values = 1.0 - 2.0 * np.log10(ks)
    values[[20, 50]] = -10.0
    fit = fit_loglog(ks, values)
    assert fit.slope == pytest.approx(-2.0, abs=1e-9)
    assert fit.intercept == pytest.approx(1.0, abs=1e-9)
    assert fit.n_used == 98
    assert fit.method == "filtered"
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_needs_enough_points():
    ks = np.geomspace(1.0, 10.0, 5)
    with pytest.raises(AnalysisError):
        fit_loglog(ks, -2.0 * np.log10(ks))
    with pytest.raises(AnalysisError):
        fit_scaling(reflection_spec(0.5, 0.0, 2), 10.0, (50.0, 500.0), 20)
    with pytest.raises(AnalysisError):
        fit_scaling(reflection_spec(0.5, 0.0, 2), 10.0, (500.0, 50.0), 100)


@pytest.fixture(scope="module")
def saturation_reports():
    ks = np.linspace(0.5, 10.0, 400)
    reports = {}
    for beta in (1.0, 2.0):
        base = UcpSpec(L=5.0, V=25.0, rho=2.5, alpha=0.5, beta=beta, G=3)
        reports[beta] = saturation_scan(stage_specs(base, range(3, 10)), ks)
    return reports


def test_saturation_is_strictly_decreasing(saturation_reports):
    for report in saturation_reports.values():
        assert [entry.stage for entry in report.entries] == [3, 4, 5, 6, 7, 8]
        assert report.is_strictly_decreasing()


def test_larger_beta_saturates_faster(saturation_reports):
    at_six = {beta: report.entries[3] for beta, report in saturation_reports.items()}
    assert at_six[1.0].stage == 6
    assert at_six[2.0].metric < at_six[1.0].metric


def test_saturation_rejects_mixed_or_broken_lists(saturation_spec):
    ks = np.linspace(0.5, 10.0, 20)
    with pytest.raises(InvalidSpecError, match="mixed-parameter"):
        saturation_scan([saturation_spec, saturation_spec.with_height(30.0).with_stage(5)], ks)
    with pytest.raises(InvalidSpecError, match="consecutive"):
        saturation_scan([saturation_spec, saturation_spec.with_stage(6)], ks)
    with pytest.raises(InvalidSpecError):
        saturation_scan([saturation_spec], ks)


def test_constant_area_reflection_converges():
    base = UcpSpec(L=1.0, V=10.0, rho=2.5, alpha=0.5, beta=1.0, G=2)
    specs = stage_specs(base, range(2, 8))
    report = saturation_scan(specs, np.linspace(0.5, 10.0, 100), V0=10.0)
    assert report.quantity == "log10_reflection"
    assert report.V0 == 10.0
    assert [entry.stage for entry in report.entries] == [2, 3, 4, 5, 6]
    assert report.metrics[-1] < 0.5 * report.metrics[0]


def test_constant_area_scan_ignores_height():
    base = UcpSpec(L=1.0, V=10.0, rho=2.5, alpha=0.5, beta=1.0, G=2)
    ks = np.linspace(0.5, 10.0, 20)
    mixed = [base, base.with_height(30.0).with_stage(3)]
    with pytest.raises(InvalidSpecError, match="mixed-parameter"):
        saturation_scan(mixed, ks)
    rescaled = saturation_scan(mixed, ks, V0=10.0)
    assert rescaled.entries[0].metric == saturation_scan([base, base.with_stage(3)], ks, V0=10.0).entries[0].metric


def test_validity_scan_covers_negative_parameters():
    rows = validity_scan([2.0, -1 / 15, -0.5, 0.0], [-0.1, 2.0, 1.0, 0.0], 20)
    by_pair = {(row["alpha"], row["beta"]): row for row in rows}
    assert by_pair[(2.0, -0.1)]["max_valid_stage"] == 19
    assert not by_pair[(2.0, -0.1)]["valid_at_G"]
    assert by_pair[(-1 / 15, 2.0)]["valid_at_G"]
    assert by_pair[(-0.5, 1.0)]["max_valid_stage"] is None
    assert not by_pair[(0.0, 0.0)]["valid_at_G"]
    assert len(rows) == 16


def test_log_opacity():
    opaque = ScatterResult(transmission=1e-100, reflection=1.0, log10_transmission=-100.0, log10_reflection=0.0)
    assert log_opacity(opaque) == pytest.approx(2.0)
    clear = ScatterResult(transmission=1.0, reflection=0.0, log10_transmission=0.0, log10_reflection=-math.inf)
    assert log_opacity(clear) == -math.inf


def test_reference_heights():
    svc = UcpSpec(L=1.0, V=10.0, rho=4.0, alpha=0.0, beta=1.0, G=2)
    assert constant_area_height(svc, 10.0) == pytest.approx(2560 / 180)
    cantor = UcpSpec(L=1.0, V=10.0, rho=3.0, alpha=1.0, beta=0.0, G=6)
    assert constant_area_height(cantor, 10.0) == pytest.approx(10.0 * 1.5**6, rel=1e-12)


def test_standard_cantor_reflection_slope():
    spec = UcpSpec(L=1.0, V=10.0, rho=3.0, alpha=1.0, beta=0.0, G=10)
    assert fit_scaling(spec, 10.0, (50.0, 500.0), 200, method="normalized").slope == pytest.approx(-2.0, abs=0.1)
