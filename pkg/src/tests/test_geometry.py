import math

import pytest
from pydantic import ValidationError

from ucp.errors import InvalidSpecError
from ucp.geometry import geometry
from ucp.schemas.schemas import UcpSpec, first_invalid_stage


def make_spec(alpha, beta, rho, G, L=10.0, V=25.0):
    return UcpSpec(L=L, V=V, rho=rho, alpha=alpha, beta=beta, G=G)


@pytest.mark.parametrize("G", range(1, 21))
def test_standard_cantor_lengths(G):
    spec = make_spec(1.0, 0.0, 3.0, G)
    assert geometry.segment_length(spec, G) == pytest.approx(10.0 / 3**G, rel=1e-12)
    assert geometry.gap_length(spec, G) == pytest.approx(10.0 / 3**G, rel=1e-12)


@pytest.mark.parametrize("G", range(1, 12))
def test_smith_volterra_cantor_lengths(G):
    spec = make_spec(0.0, 1.0, 4.0, G, L=1.0)
    assert geometry.segment_length(spec, G) == pytest.approx(geometry.svc_segment_length(1.0, 4.0, G), rel=1e-12)
    assert geometry.gap_length(spec, G) == pytest.approx(geometry.svc_gap_length(1.0, 4.0, G), rel=1e-12)


def test_smith_volterra_cantor_second_stage():
    spec = make_spec(0.0, 1.0, 4.0, 2, L=1.0)
    assert geometry.gap_length(spec, 1) == pytest.approx(1 / 4)
    assert geometry.gap_length(spec, 2) == pytest.approx(3 / 128)
    assert geometry.gamma2(spec, 2, 1) == pytest.approx(-29 / 128)


@pytest.mark.parametrize(
    "alpha, beta, rho",
    [(1.0, 0.0, 3.0), (0.0, 1.0, 4.0), (0.5, 0.5, 2.5), (2.0, -0.1, math.e), (-1 / 15, 2.0, 3.0)],
)
def test_pochhammer_forms_agree(alpha, beta, rho):
    spec = make_spec(alpha, beta, rho, 6)
    for g in range(7):
        assert geometry.segment_length_pochhammer(spec, g) == pytest.approx(
            geometry.segment_length(spec, g), rel=1e-12
        )
    for f in range(1, 7):
        assert geometry.super_period_pochhammer(spec, f) == pytest.approx(geometry.super_period(spec, f), rel=1e-12)


def test_build_segments_first_stages():
    segments = geometry.build_segments(make_spec(1.0, 0.0, 3.0, 1))
    assert len(segments) == 2
    assert segments.offsets.tolist() == pytest.approx([0.0, 20 / 3])
    assert segments.widths.tolist() == pytest.approx([10 / 3, 10 / 3])

    segments = geometry.build_segments(make_spec(1.0, 0.0, 3.0, 2))
    assert segments.offsets.tolist() == pytest.approx([0.0, 20 / 9, 60 / 9, 80 / 9])
    assert segments.gaps().tolist() == pytest.approx([10 / 9, 30 / 9, 10 / 9])


@pytest.mark.parametrize("alpha, beta, rho", [(1.0, 0.0, 2.5), (0.5, 1.0, 2.5), (0.0, 1.0, 4.0)])
def test_segments_are_consistent_with_lengths(alpha, beta, rho):
    spec = make_spec(alpha, beta, rho, 5)
    segments = geometry.build_segments(spec)
    assert len(segments) == 2**5
    assert segments.widths[0] == pytest.approx(geometry.segment_length(spec, 5), rel=1e-12)
    assert segments.ends[-1] == pytest.approx(spec.L, rel=1e-12)
    assert spec.L - segments.total_width() == pytest.approx(geometry.total_gap_width(spec), rel=1e-9)
    assert (segments.gaps() > 0).all()


@pytest.mark.parametrize("alpha, beta, rho", [(1.0, 0.0, 3.0), (0.5, 0.5, 2.5), (0.5, 2.0, 4.0)])
def test_super_periods_match_barrier_offsets(alpha, beta, rho):
    spec = make_spec(alpha, beta, rho, 5)
    offsets = geometry.build_segments(spec).offsets
    for f in range(1, 6):
        assert geometry.super_period(spec, f) == pytest.approx(offsets[2 ** (f - 1)] - offsets[0], rel=1e-12)


def test_gamma1_from_super_periods(cantor_spec):
    periods = geometry.super_periods(cantor_spec)
    for q in range(1, cantor_spec.G + 1):
        expected = sum(periods[: q - 1]) - periods[q - 1]
        assert geometry.gamma1(cantor_spec, q) == pytest.approx(expected, rel=1e-12)
        assert geometry.gamma1(cantor_spec, q) < 0
    gammas = [geometry.gamma1(cantor_spec, q) for q in range(1, cantor_spec.G + 1)]
    assert geometry.super_periods_from_gamma1(gammas) == pytest.approx(periods, rel=1e-12)


@pytest.mark.parametrize("rho", [2.5, 3.0, 4.0])
def test_general_cantor_closed_forms(rho):
    G = 6
    spec = make_spec(1.0, 0.0, rho, G)
    assert geometry.general_cantor_segment_length(10.0, rho, G) == pytest.approx(
        geometry.segment_length(spec, G), rel=1e-12
    )
    assert geometry.general_cantor_gap_length(10.0, rho, G) == pytest.approx(geometry.gap_length(spec, G), rel=1e-12)
    for q in range(1, G + 1):
        assert geometry.general_cantor_gamma1(10.0, rho, G, q) == pytest.approx(geometry.gamma1(spec, q), rel=1e-12)
        for r in range(1, q):
            assert geometry.general_cantor_gamma2(10.0, rho, G, q, r) == pytest.approx(
                geometry.gamma2(spec, q, r), rel=1e-12
            )


def test_svc_gamma_closed_forms():
    G = 5
    spec = make_spec(0.0, 1.0, 4.0, G, L=1.0)
    for q in range(1, G + 1):
        assert geometry.svc_gamma1(1.0, 4.0, G, q) == pytest.approx(geometry.gamma1(spec, q), rel=1e-12)
        for r in range(1, q):
            assert geometry.svc_gamma2(1.0, 4.0, G, q, r) == pytest.approx(geometry.gamma2(spec, q, r), rel=1e-12)


def test_index_checks(cantor_spec):
    with pytest.raises(InvalidSpecError):
        geometry.segment_length(cantor_spec, 4)
    with pytest.raises(InvalidSpecError):
        geometry.gap_length(cantor_spec, 0)
    with pytest.raises(InvalidSpecError):
        geometry.gamma2(cantor_spec, 2, 2)


def test_validity_bound(bounded_spec):
    assert geometry.max_valid_stage(2.0, -0.1) == 19
    assert first_invalid_stage(2.0, -0.1, 19) is None
    assert geometry.segment_length(bounded_spec, 19) > 0
    with pytest.raises(ValidationError, match=r"alpha \+ beta\*g <= 0 at g=20"):
        bounded_spec.with_stage(20)
    with pytest.raises(InvalidSpecError, match="g=20"):
        geometry.validate_stage_range(2.0, -0.1, 20)


def test_max_valid_stage_edges():
    assert geometry.max_valid_stage(1.0, 0.0) is None
    assert geometry.max_valid_stage(-0.5, 1.0) is None
    assert geometry.max_valid_stage(-1.0, 0.5) == 0
    with pytest.raises(InvalidSpecError):
        geometry.max_valid_stage(0.0, 0.0)


@pytest.mark.parametrize(
    "fields, message",
    [
        ({"L": 0.0}, "L > 0"),
        ({"rho": 1.0}, "rho > 1"),
        ({"alpha": 0.0, "beta": 0.0}, "cannot both be zero"),
        ({"V": math.inf}, "V must be finite"),
    ],
)
def test_spec_rejects_ill_formed_parameters(fields, message):
    values = {"L": 10.0, "V": 25.0, "rho": 3.0, "alpha": 1.0, "beta": 0.0, "G": 2, **fields}
    with pytest.raises(ValidationError, match=message):
        UcpSpec(**values)


def test_negative_alpha_extension_is_well_formed():
    spec = make_spec(-1 / 15, 2.0, 3.0, 8)
    assert all(geometry.removal_fraction(spec, g) < 1 for g in range(1, 9))
    assert geometry.segment_length(spec, 8) > 0


def test_reference_lengths():
    svc = make_spec(0.0, 1.0, 4.0, 2, L=1.0)
    assert geometry.segment_length(svc, 2) == pytest.approx(45 / 256)
    assert geometry.segment_length(svc, 0) == 1.0
    assert geometry.gamma1(svc, 2) == pytest.approx(-(45 / 256 + 1 / 4))
    assert geometry.gap_length(make_spec(0.5, 1.0, 2.5, 1, L=5.0), 1) == pytest.approx(5 * 2.5**-1.5)
    assert geometry.super_period(make_spec(1.0, 0.0, 3.0, 2, L=1.0), 1) == pytest.approx(2 / 9)
    assert geometry.super_period(make_spec(0.0, 1.0, 4.0, 1, L=1.0), 1) == pytest.approx(5 / 8)


def test_reference_segments():
    segments = geometry.build_segments(make_spec(0.0, 1.0, 4.0, 1, L=1.0))
    assert segments.offsets.tolist() == pytest.approx([0.0, 5 / 8])
    assert segments.widths.tolist() == pytest.approx([3 / 8, 3 / 8])
    assert geometry.build_segments(make_spec(1.0, 0.0, 3.0, 0, L=1.0)).barriers == [(0.0, 1.0)]
